#include <doctest.h>

#include <cmath>
#include <memory>

#include "pmchwt/formulations.hpp"
#include "pmchwt/geometry.hpp"
#include "pmchwt/krylov.hpp"
#include "pmchwt/spaces.hpp"

using namespace pmchwt;

namespace {

std::shared_ptr<const geometry::OrientedSurfaceMesh> sphere_surface(double h) {
  const auto mesh = geometry::make_split_sphere(h, geometry::SphereSplit::none);
  return std::make_shared<const geometry::OrientedSurfaceMesh>(geometry::build_domain_boundary(mesh, 1));
}

double max_abs(const spaces::SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (spaces::SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

/// Total charge of each basis function: sum over its shape terms of coef * (div = 1/area) * area.
std::vector<double> charges(const spaces::TraceSpace& sp) {
  std::vector<double> q(sp.size(), 0.0);
  for (const auto& terms : sp.terms)
    for (const auto& t : terms) q[t.dof] += t.coef;
  return q;
}

std::vector<operators::Material> vacuum(int n) { return std::vector<operators::Material>(n); }

}  // namespace

TEST_CASE("RWG space has one function per edge of a closed surface") {
  const auto s = sphere_surface(0.4);
  const auto rwg = spaces::rwg_space(s);
  const auto edges = geometry::edge_enumeration(*s);
  CHECK(rwg.size() == static_cast<int>(edges.edges.size()));
  CHECK(rwg.size() == 3 * static_cast<int>(s->size()) / 2);
}

TEST_CASE("RWG and BC functions carry no net charge") {
  const auto s = sphere_surface(0.4);
  for (const auto& sp : {spaces::rwg_space(s), spaces::bc_space(s)})
    for (double q : charges(sp)) CHECK(std::abs(q) < 1e-12);
}

TEST_CASE("BC functions live on the barycentric refinement") {
  const auto s = sphere_surface(0.4);
  const auto bc = spaces::bc_space(s);
  CHECK(bc.support->size() == 6 * s->size());
  CHECK(bc.size() == spaces::rwg_space(s).size());
}

TEST_CASE("the cross Gram of a space with itself is antisymmetric") {
  const auto s = sphere_surface(0.4);
  for (const auto& sp : {spaces::rwg_space(s), spaces::bc_space(s)}) {
    const spaces::SparseMatrix g = spaces::gram_cross(sp, sp);
    const spaces::SparseMatrix sym = g + spaces::SparseMatrix(g.transpose());
    CHECK(max_abs(sym) < 1e-14 * max_abs(g));
  }
}

TEST_CASE("the RWG x BC Gram is invertible on a sphere") {
  const auto s = sphere_surface(0.4);
  const spaces::SparseMatrix g = spaces::gram_cross(spaces::rwg_space(s), spaces::bc_space(s));
  CHECK_NOTHROW(krylov::SparseSolver{g});
  const krylov::SparseSolver lu(g);
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(g.rows(), -1.0, 1.0);
  const Eigen::VectorXd x = lu.solve(b);
  CHECK((g * x - b).norm() < 1e-10 * b.norm());
}

TEST_CASE("the single-trace embedding has entries +-1") {
  const auto p = formulations::build_problem(geometry::make_two_cubes(0.5), vacuum(3), 1.0, false);
  const auto& r = p.R.scalar;
  CHECK(r.rows() == p.rwg.scalar_size());
  CHECK(r.cols() == p.reduced_rwg.scalar_size());
  for (int k = 0; k < r.outerSize(); ++k)
    for (spaces::SparseMatrix::InnerIterator it(r, k); it; ++it) CHECK(std::abs(std::abs(it.value()) - 1.0) == 0.0);
  // every full dof is reached by exactly one reduced dof
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(r.cols());
  Eigen::VectorXd hits = Eigen::VectorXd::Zero(r.rows());
  for (int k = 0; k < r.outerSize(); ++k)
    for (spaces::SparseMatrix::InnerIterator it(r, k); it; ++it) hits[it.row()] += 1.0;
  CHECK(hits.minCoeff() == 1.0);
  CHECK(hits.maxCoeff() == 1.0);
}

TEST_CASE("single-trace functions are self-polar under the cross pairing") {
  const auto p = formulations::build_problem(geometry::make_two_cubes(0.5), vacuum(3), 1.0, false);
  const auto scalar = spaces::gram_cross(p.rwg, p.rwg);
  for (bool swapped : {false, true}) {
    const spaces::SparseMatrix g = spaces::expand_gram(p.rwg, scalar, swapped);
    const spaces::SparseMatrix rgr = spaces::SparseMatrix(p.R.expanded.transpose()) * g * p.R.expanded;
    CHECK(max_abs(g) > 0.0);
    CHECK(max_abs(rgr) < 1e-12 * max_abs(g));
  }
}
