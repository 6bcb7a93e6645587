#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "pmchwt/types.hpp"

namespace pmchwt::krylov {

using Apply = std::function<VectorXc(const VectorXc&)>;

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // relative, entry 0 is the initial residual
  bool converged = false;
  double tolerance = 0.0;
  double true_residual = 0.0;  // |rhs - M x| / |rhs| recomputed at the end
  double wall_time = 0.0;
};

struct GmresOptions {
  double tol = 2e-5;
  int maxit = 2000;
  std::size_t memory_budget = std::size_t(3) << 30;  // bytes for the Krylov basis
};

class MemoryBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unrestarted GMRES from a zero initial guess, modified Gram-Schmidt with one
/// reorthogonalisation pass. Exceeding maxit yields a non-converged report.
std::pair<VectorXc, SolveReport> gmres(const Apply& op, const VectorXc& rhs, const GmresOptions& opt = {});

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse LU of a real square matrix, solving real or complex right-hand sides.
class SparseSolver {
 public:
  explicit SparseSolver(const Eigen::SparseMatrix<double>& a);
  ~SparseSolver();
  SparseSolver(SparseSolver&&) noexcept;
  SparseSolver& operator=(SparseSolver&&) noexcept;

  int size() const { return n_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  VectorXc solve(const VectorXc& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// sigma_max / sigma_min of the operator materialised column by column;
/// +infinity when sigma_min underflows to zero.
double condition_number(const Apply& op, int dim, int max_dim = 4000);

/// Same for an explicit matrix.
double condition_number(const MatrixXc& m);

}  // namespace pmchwt::krylov
