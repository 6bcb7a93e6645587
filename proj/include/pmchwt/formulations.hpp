#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "pmchwt/geometry.hpp"
#include "pmchwt/krylov.hpp"
#include "pmchwt/operators.hpp"
#include "pmchwt/spaces.hpp"

namespace pmchwt::formulations {

/// Geometry and discrete spaces of one multi-domain scattering problem.
struct Problem {
  geometry::SkeletonMesh mesh;
  geometry::ReducedGeometry reduced;
  std::vector<operators::Material> materials;  // per domain, domain 0 is the background
  double kappa0 = 1.0;

  spaces::MultiTraceSpace rwg;          // full, per domain boundary
  spaces::MultiTraceSpace bc;           // full, empty unless requested
  spaces::MultiTraceSpace reduced_rwg;  // per reduced surface
  spaces::MultiTraceSpace reduced_bc;
  spaces::EmbeddingMatrix R;

  bool has_bc() const { return !bc.domains.empty(); }
  cplx kappa(int d) const { return materials[d].kappa_from(kappa0); }
  cplx eta(int d) const { return materials[d].eta_rel(); }
};

/// Validates the mesh and builds all spaces; BC spaces only when `with_bc`.
Problem build_problem(geometry::SkeletonMesh mesh, std::vector<operators::Material> materials, double kappa0,
                      bool with_bc, const geometry::OwnerOverrides& overrides = {});

/// Per-domain Calderon blocks A_i = [K_i, -eta_i T_i; T_i / eta_i, K_i] on the
/// full RWG multi-trace space, and the x-pairing Gram G_ff.
struct BlockCalderon {
  std::vector<MatrixXc> T, K;
  std::vector<cplx> eta;
  std::vector<spaces::SparseMatrix> gram;  // scalar, per domain
  std::vector<int> block, dim;             // layout copied from the space

  int size() const;
  VectorXc apply_A(const VectorXc& x) const;
  VectorXc apply_gram(const VectorXc& x) const;
  /// (-1/2 G - A) x, or -A x without the identity term.
  VectorXc apply_interior(const VectorXc& x, bool identity_term = true) const;
};

/// Every domain wavenumber is multiplied by `wavenumber_factor` (e.g. -i for the
/// decaying companion operator).
BlockCalderon assemble_block_calderon(const Problem& p, const operators::QuadratureOptions& q = {},
                                      cplx wavenumber_factor = 1.0);

/// Square system operator with its right-hand side.
struct LinearSystem {
  int dim = 0;
  krylov::Apply apply;
  VectorXc rhs;
};

/// Physical excitation data: x-pairing of the incident traces with domain-0 test functions.
VectorXc excitation(const Problem& p, const operators::PlaneWave& pw);

/// R^T A R w = R^T e_f.
LinearSystem classic_pmchwt(const BlockCalderon& a, const spaces::EmbeddingMatrix& R, const VectorXc& e_f);

struct QlOptions {
  double delta = 0.1;
  double cutoff_factor = 3.5;
  operators::Screening screening = operators::Screening::gaussian;
  bool identity_term = true;
  operators::QuadratureOptions quadrature{};
};

/// Factor chain  M = I~^-1 S~ I^-1 (-1/2 G - A) R  with the cached Gram factorizations.
/// I pairs RWG tests with BC trials on every domain boundary; I~ pairs reduced
/// BC tests with reduced RWG trials, so each inverse contracts matching indices.
class ComposedSystem {
 public:
  ComposedSystem(const Problem& p, const BlockCalderon& a, const QlOptions& opt);

  int dim() const { return static_cast<int>(R_->cols()); }
  VectorXc apply(const VectorXc& w) const;
  /// I~^-1 S~ I^-1 applied to a full multi-trace RWG-tested vector.
  VectorXc regularise(const VectorXc& v) const;
  /// Right-hand side for the excitation e_f.
  VectorXc rhs(const VectorXc& e_f) const;
  LinearSystem system(const VectorXc& e_f) const;

  /// I^-1 on a full multi-trace vector (BC coefficients of the dual representation).
  VectorXc full_gram_solve(const VectorXc& v) const;
  const operators::ScreenedMatrix& screened() const { return S_; }

 private:
  const Problem* p_;
  const BlockCalderon* a_;
  const spaces::EmbeddingMatrix* R_;
  bool identity_term_;
  operators::ScreenedMatrix S_;
  std::vector<std::optional<krylov::SparseSolver>> full_, reduced_;
};

/// Screened matrix on reduced BC x reduced BC and the preconditioned classic
/// operator  I~^-1 S_red I~^-1 R^T (-A) R  used to check the junction-free collapse.
struct PreconditionedClassic {
  operators::ScreenedMatrix S;
  std::vector<std::optional<krylov::SparseSolver>> reduced_gf, reduced_fg;
};
PreconditionedClassic make_preconditioned_classic(const Problem& p, const QlOptions& opt);
VectorXc apply_preconditioned_classic(const PreconditionedClassic& pc, const Problem& p, const BlockCalderon& a,
                                      const VectorXc& w);

/// v_f = (-1/2 G - A) R w + e_f and its dual representation v^g = I^-1 v_f.
struct ExtinctionResidual {
  VectorXc v_f, v_g;
};
ExtinctionResidual extinction_residual(const ComposedSystem& sys, const BlockCalderon& a,
                                       const spaces::EmbeddingMatrix& R, const VectorXc& w, const VectorXc& e_f);

/// Applies per-domain scalar sparse solvers to both components of a multi-trace vector.
VectorXc solve_blocks(const std::vector<std::optional<krylov::SparseSolver>>& solvers,
                      const spaces::MultiTraceSpace& layout, const VectorXc& v);

/// Per-domain Grams <n x test, trial>, factorised; empty domains stay unset.
std::vector<std::optional<krylov::SparseSolver>> factor_grams(const spaces::MultiTraceSpace& test,
                                                              const spaces::MultiTraceSpace& trial);

}  // namespace pmchwt::formulations
