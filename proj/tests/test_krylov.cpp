#include <doctest.h>

#include <cmath>
#include <limits>

#include "pmchwt/krylov.hpp"

using namespace pmchwt;
using namespace pmchwt::krylov;

namespace {

VectorXc ramp(int n) {
  VectorXc b(n);
  for (int i = 0; i < n; ++i) b[i] = cplx(1.0 + i, 0.5 - i);
  return b;
}

}  // namespace

TEST_CASE("GMRES on the identity converges in one iteration") {
  const auto [x, rep] = gmres([](const VectorXc& v) { return v; }, ramp(20));
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK((x - ramp(20)).norm() < 1e-12);
}

TEST_CASE("GMRES on an operator with two eigenvalues converges in two iterations") {
  const int n = 30;
  VectorXc d(n);
  for (int i = 0; i < n; ++i) d[i] = i % 2 ? cplx(3.0, 1.0) : cplx(-0.5, 2.0);
  const auto [x, rep] = gmres([&](const VectorXc& v) -> VectorXc { return d.cwiseProduct(v); }, ramp(n));
  CHECK(rep.converged);
  CHECK(rep.iterations == 2);
  CHECK((d.cwiseProduct(x) - ramp(n)).norm() < 1e-10 * ramp(n).norm());
}

TEST_CASE("GMRES honours the tolerance and reports the history") {
  const int n = 60;
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(n, 1.0, 100.0);
  GmresOptions opt;
  opt.tol = 1e-6;
  const auto [x, rep] = gmres([&](const VectorXc& v) -> VectorXc { return d.cast<cplx>().cwiseProduct(v); },
                              ramp(n), opt);
  CHECK(rep.converged);
  CHECK(rep.residual_history.front() == doctest::Approx(1.0));
  CHECK(rep.residual_history.back() <= 1e-6);
  CHECK(static_cast<int>(rep.residual_history.size()) == rep.iterations + 1);
  CHECK(rep.true_residual <= 1e-5);
}

TEST_CASE("GMRES stops at maxit without converging") {
  const int n = 40;
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(n, 1.0, 1e4);
  GmresOptions opt;
  opt.tol = 1e-14;
  opt.maxit = 5;
  const auto [x, rep] = gmres([&](const VectorXc& v) -> VectorXc { return d.cast<cplx>().cwiseProduct(v); },
                              ramp(n), opt);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 5);
}

TEST_CASE("GMRES refuses a basis beyond the memory budget") {
  GmresOptions opt;
  opt.memory_budget = 1024;
  CHECK_THROWS_AS(gmres([](const VectorXc& v) { return v; }, ramp(1000), opt), MemoryBudgetError);
}

TEST_CASE("sparse LU solves real and complex right-hand sides") {
  Eigen::SparseMatrix<double> a(3, 3);
  a.insert(0, 0) = 4.0;
  a.insert(0, 1) = 1.0;
  a.insert(1, 1) = 3.0;
  a.insert(2, 0) = -1.0;
  a.insert(2, 2) = 2.0;
  a.makeCompressed();
  const SparseSolver lu(a);
  const Eigen::VectorXd b(Eigen::Vector3d(1.0, 2.0, 3.0));
  CHECK((a * lu.solve(b) - b).norm() < 1e-14);
  const VectorXc bc = ramp(3);
  const VectorXc xc = lu.solve(bc);
  CHECK((a.cast<cplx>() * xc - bc).norm() < 1e-13);
}

TEST_CASE("sparse LU rejects a singular matrix") {
  Eigen::SparseMatrix<double> a(2, 2);
  a.insert(0, 0) = 1.0;
  a.insert(1, 0) = 2.0;
  a.makeCompressed();
  CHECK_THROWS_AS(SparseSolver{a}, FactorizationError);
}

TEST_CASE("condition numbers") {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 0) = 10.0;
  m(1, 1) = 1.0;
  CHECK(condition_number(m) == doctest::Approx(10.0));
  CHECK(condition_number([&](const VectorXc& v) -> VectorXc { return m * v; }, 2) == doctest::Approx(10.0));
  m(1, 1) = 0.0;
  CHECK(condition_number(m) == std::numeric_limits<double>::infinity());
}
