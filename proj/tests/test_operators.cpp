#include <doctest.h>

#include <cmath>
#include <memory>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "pmchwt/formulations.hpp"
#include "pmchwt/geometry.hpp"
#include "pmchwt/operators.hpp"
#include "pmchwt/spaces.hpp"

using namespace pmchwt;
using namespace pmchwt::operators;

namespace {

std::shared_ptr<const geometry::OrientedSurfaceMesh> sphere_surface(double h) {
  const auto mesh = geometry::make_split_sphere(h, geometry::SphereSplit::none);
  return std::make_shared<const geometry::OrientedSurfaceMesh>(geometry::build_domain_boundary(mesh, 1));
}

/// Two triangles, the second one shifted by `offset`.
spaces::SurfaceGeometry triangle_pair(const Vec3& offset, double size = 1.0) {
  std::vector<Vec3> v{Vec3(0, 0, 0), Vec3(size, 0, 0), Vec3(0, size, 0)};
  for (int i = 0; i < 3; ++i) v.push_back(v[i] + offset);
  return spaces::make_geometry(geometry::make_surface(v, {{0, 1, 2}, {3, 4, 5}}));
}

double max_abs(const MatrixXc& a) { return a.cwiseAbs().maxCoeff(); }

bool all_zero(const PairBlocks& b) {
  for (const auto& row : b.vector)
    for (cplx v : row)
      if (v != 0.0) return false;
  return b.scalar == 0.0;
}

}  // namespace

TEST_CASE("material wavenumber and impedance") {
  const auto m = Material::relative(4.0, 1.0);
  CHECK(std::abs(m.kappa_from(2.0) - cplx(4.0)) < 1e-12);
  CHECK(std::abs(m.eta_rel() - cplx(0.5)) < 1e-12);
  CHECK_THROWS(validate(Material::relative(-1.0, 1.0)));
}

TEST_CASE("kernel values") {
  const auto s = KernelSpec::screened(0.2);
  CHECK(s.value(0.2).real() == doctest::Approx(std::exp(-1.0) / (4.0 * kPi * 0.2)).epsilon(1e-14));
  CHECK(s.value(3.5 * 0.2 * (1.0 + 1e-12)) == 0.0);
  CHECK(s.value(3.5 * 0.2 * (1.0 - 1e-12)) != 0.0);
  const auto d = KernelSpec::decaying(3.0);
  CHECK(d.value(0.5).real() == doctest::Approx(std::exp(-1.5) / (4.0 * kPi * 0.5)).epsilon(1e-14));
  const auto h = KernelSpec::helmholtz(2.0);
  CHECK(std::abs(h.value(1.0) - std::exp(-2.0 * kI) / (4.0 * kPi)) < 1e-15);
}

TEST_CASE("coplanar pairs have an exactly vanishing double-layer block") {
  for (const Vec3& off : {Vec3(2.0, 0.5, 0.0), Vec3(0.0, 0.0, 0.0), Vec3(1.0, 0.0, 0.0)}) {
    const auto g = triangle_pair(off);
    REQUIRE(coplanar(g.tris[0], g.tris[1]));
    const auto b = pair_blocks(g.tris[0], g.tris[1], KernelSpec::helmholtz(3.0), true);
    for (const auto& row : b.dlp)
      for (cplx v : row) CHECK(v == 0.0);
  }
  const auto g = triangle_pair(Vec3(0.3, 0.2, 0.7));
  CHECK_FALSE(coplanar(g.tris[0], g.tris[1]));
  const auto b = pair_blocks(g.tris[0], g.tris[1], KernelSpec::helmholtz(3.0), true);
  CHECK(std::abs(b.dlp[0][1]) > 0.0);
}

TEST_CASE("screened pair blocks vanish beyond the cutoff") {
  const double delta = 1.0, small = 0.01;
  const auto beyond = triangle_pair(Vec3(0.0, 0.0, 3.5 * delta + 1e-3), small);
  CHECK(all_zero(pair_blocks(beyond.tris[0], beyond.tris[1], KernelSpec::screened(delta), false)));
  const auto within = triangle_pair(Vec3(0.0, 0.0, 3.5 * delta - 3.0 * small), small);
  CHECK_FALSE(all_zero(pair_blocks(within.tris[0], within.tris[1], KernelSpec::screened(delta), false)));
}

TEST_CASE("screened matrix sparsity follows the range") {
  const auto p = formulations::build_problem(geometry::make_split_sphere(0.4, geometry::SphereSplit::none),
                                             {Material::vacuum(), Material::relative(2.0, 1.0)}, 1.0, true);
  const auto wide = assemble_screened(p.reduced_bc, p.reduced_bc, KernelSpec::screened(0.4));
  const auto narrow = assemble_screened(p.reduced_bc, p.reduced_bc, KernelSpec::screened(0.1));
  CHECK(narrow.nnz_per_column() < wide.nnz_per_column());
  CHECK(wide.nnz_per_column() < static_cast<double>(wide.scalar.rows()));
  // the scalar form is symmetric on a single space up to quadrature error
  const spaces::SparseMatrix s = wide.scalar;
  const spaces::SparseMatrix diff = s - spaces::SparseMatrix(s.transpose());
  CHECK(Eigen::MatrixXd(diff).cwiseAbs().maxCoeff() < 1e-4 * Eigen::MatrixXd(s).cwiseAbs().maxCoeff());
}

TEST_CASE("single layer is complex symmetric") {
  const auto rwg = spaces::rwg_space(sphere_surface(0.5));
  const MatrixXc t = assemble_single_layer(rwg, 2.0);
  CHECK(max_abs(t - t.transpose()) < 1e-10 * max_abs(t));
}

TEST_CASE("layer assembly agrees with the separate assemblers") {
  const auto rwg = spaces::rwg_space(sphere_surface(0.5));
  const auto both = assemble_layers(rwg, 2.0);
  CHECK(max_abs(both.T - assemble_single_layer(rwg, 2.0)) < 1e-12 * max_abs(both.T));
  CHECK(max_abs(both.K - assemble_double_layer_pv(rwg, 2.0)) < 1e-12 * max_abs(both.K));
}

TEST_CASE("raising quadrature orders changes the layers little") {
  const auto rwg = spaces::rwg_space(sphere_surface(0.5));
  QuadratureOptions fine;
  fine.boost = 2;
  fine.singular_order = 6;
  const auto a = assemble_layers(rwg, 2.0);
  const auto b = assemble_layers(rwg, 2.0, fine);
  CHECK(max_abs(a.T - b.T) < 1e-3 * max_abs(b.T));
  CHECK(max_abs(a.K - b.K) < 1e-3 * max_abs(b.K));
}

TEST_CASE("energy matrix is symmetric positive definite") {
  for (auto sp : {spaces::rwg_space(sphere_surface(0.5)), spaces::bc_space(sphere_surface(0.5))}) {
    const Eigen::MatrixXd e = assemble_energy_block(sp, 2.0);
    CHECK((e - e.transpose()).cwiseAbs().maxCoeff() < 1e-12 * e.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(e);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("plane-wave right-hand side lives on the background domain and is linear") {
  const auto p = formulations::build_problem(geometry::make_two_cubes(0.5),
                                             {Material::vacuum(), Material::relative(2.0, 1.0),
                                              Material::relative(4.0, 1.0)},
                                             3.0, false);
  PlaneWave pw;
  const VectorXc b = planewave_rhs(p.rwg, pw, 3.0);
  REQUIRE(b.size() == p.rwg.size());
  const int n0 = 2 * p.rwg.dim(0);
  CHECK(b.head(n0).norm() > 0.0);
  CHECK(b.tail(b.size() - n0).norm() == 0.0);
  pw.amplitude = cplx(2.0, -1.0);
  CHECK((planewave_rhs(p.rwg, pw, 3.0) - cplx(2.0, -1.0) * b).norm() < 1e-12 * b.norm());
}

TEST_CASE("plane wave fields are transverse") {
  PlaneWave pw;
  const Vec3 x(0.3, -0.2, 0.9);
  const CVec3 e = pw.e(x, 2.0);
  const CVec3 h = pw.h(x, 2.0, 1.0);
  CHECK(std::abs(pmchwt::dot(e, pw.direction)) < 1e-15);
  CHECK(std::abs(pmchwt::dot(h, pw.direction)) < 1e-15);
  CHECK(std::abs(pmchwt::dot(e, h)) < 1e-15);
  pw.polarization = Vec3(0.0, 0.0, 1.0);
  CHECK_THROWS(pw.validate());
}
