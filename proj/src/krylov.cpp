#include "pmchwt/krylov.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

namespace pmchwt::krylov {

std::pair<VectorXc, SolveReport> gmres(const Apply& op, const VectorXc& rhs, const GmresOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("gmres: tolerance must be positive");
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n = rhs.size();
  SolveReport rep;
  rep.tolerance = opt.tol;
  VectorXc x = VectorXc::Zero(n);
  const double beta = rhs.norm();
  rep.residual_history.push_back(beta == 0.0 ? 0.0 : 1.0);
  if (beta == 0.0) {
    rep.converged = true;
    return {x, rep};
  }
  std::vector<VectorXc> v;
  std::vector<VectorXc> hcols;  // column j has j + 2 entries
  std::vector<cplx> cs, sn;
  VectorXc g = VectorXc::Zero(1);
  g[0] = beta;
  v.push_back(rhs / beta);
  int k = 0;
  for (; k < opt.maxit; ++k) {
    if (static_cast<std::size_t>(k + 2) * static_cast<std::size_t>(n) * sizeof(cplx) > opt.memory_budget) {
      std::ostringstream msg;
      msg << "gmres: Krylov basis of " << k + 2 << " vectors of length " << n << " exceeds the memory budget";
      throw MemoryBudgetError(msg.str());
    }
    VectorXc w = op(v[k]);
    VectorXc h = VectorXc::Zero(k + 2);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= k; ++i) {
        const cplx c = v[i].dot(w);
        h[i] += c;
        w -= c * v[i];
      }
    h[k + 1] = w.norm();
    for (int i = 0; i < k; ++i) {
      const cplx a = h[i], b = h[i + 1];
      h[i] = std::conj(cs[i]) * a + std::conj(sn[i]) * b;
      h[i + 1] = -sn[i] * a + cs[i] * b;
    }
    const cplx a = h[k];
    const double b = std::abs(h[k + 1]);
    const double r = std::hypot(std::abs(a), b);
    cplx c, s;
    if (r == 0.0) {
      c = 1.0;
      s = 0.0;
    } else {
      c = a / r;
      s = h[k + 1] / r;
    }
    cs.push_back(c);
    sn.push_back(s);
    h[k] = r;
    h[k + 1] = 0.0;
    g.conservativeResize(k + 2);
    g[k + 1] = -s * g[k];
    g[k] = std::conj(c) * g[k];
    hcols.push_back(h);
    const double res = std::abs(g[k + 1]) / beta;
    rep.residual_history.push_back(res);
    const bool breakdown = std::abs(h[k]) == 0.0 || w.norm() <= 1e-300;
    if (res <= opt.tol || breakdown) {
      ++k;
      break;
    }
    v.push_back(w / w.norm());
  }
  rep.iterations = k;
  // back substitution
  VectorXc y = VectorXc::Zero(k);
  for (int i = k - 1; i >= 0; --i) {
    cplx s = g[i];
    for (int j = i + 1; j < k; ++j) s -= hcols[j][i] * y[j];
    y[i] = hcols[i][i] == cplx(0.0) ? cplx(0.0) : s / hcols[i][i];
  }
  for (int i = 0; i < k; ++i) x += y[i] * v[i];
  rep.true_residual = (rhs - op(x)).norm() / beta;
  rep.converged = rep.residual_history.back() <= opt.tol;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {x, rep};
}

struct SparseSolver::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseSolver::SparseSolver(const Eigen::SparseMatrix<double>& a) : impl_(std::make_unique<Impl>()), n_(static_cast<int>(a.rows())) {
  if (a.rows() != a.cols()) throw FactorizationError("sparse factorization needs a square matrix");
  Eigen::SparseMatrix<double> m = a;
  m.makeCompressed();
  impl_->lu.analyzePattern(m);
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sparse factorization failed: " << impl_->lu.lastErrorMessage();
    throw FactorizationError(msg.str());
  }
  // SparseLU accepts tiny pivots; reject numerically singular matrices by a round trip
  Eigen::VectorXd b(n_);
  for (int i = 0; i < n_; ++i) b[i] = std::sin(1.0 + 0.7 * i);
  const Eigen::VectorXd x = impl_->lu.solve(b);
  const double res = (m * x - b).norm() / std::max(b.norm(), 1e-300);
  if (!x.allFinite() || !(res < 1e-8)) {
    std::ostringstream msg;
    msg << "sparse factorization: matrix is numerically singular (round-trip residual " << res
        << ", log|det| = " << impl_->lu.logAbsDeterminant() << ")";
    throw FactorizationError(msg.str());
  }
}

SparseSolver::~SparseSolver() = default;
SparseSolver::SparseSolver(SparseSolver&&) noexcept = default;
SparseSolver& SparseSolver::operator=(SparseSolver&&) noexcept = default;

Eigen::VectorXd SparseSolver::solve(const Eigen::VectorXd& b) const {
  if (b.size() != n_) throw std::invalid_argument("SparseSolver::solve: size mismatch");
  return impl_->lu.solve(b);
}

VectorXc SparseSolver::solve(const VectorXc& b) const {
  if (b.size() != n_) throw std::invalid_argument("SparseSolver::solve: size mismatch");
  Eigen::MatrixXd rhs(n_, 2);
  rhs.col(0) = b.real();
  rhs.col(1) = b.imag();
  const Eigen::MatrixXd x = impl_->lu.solve(rhs);
  VectorXc out(n_);
  out.real() = x.col(0);
  out.imag() = x.col(1);
  return out;
}

double condition_number(const MatrixXc& m) {
  Eigen::BDCSVD<MatrixXc> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s[s.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

double condition_number(const Apply& op, int dim, int max_dim) {
  if (dim > max_dim) {
    std::ostringstream msg;
    msg << "condition_number: dimension " << dim << " exceeds the dense limit " << max_dim;
    throw std::invalid_argument(msg.str());
  }
  MatrixXc m(dim, dim);
  VectorXc e = VectorXc::Zero(dim);
  for (int j = 0; j < dim; ++j) {
    e[j] = 1.0;
    m.col(j) = op(e);
    e[j] = 0.0;
  }
  return condition_number(m);
}

}  // namespace pmchwt::krylov
