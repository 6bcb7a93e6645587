#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "pmchwt/fields.hpp"
#include "pmchwt/formulations.hpp"
#include "pmchwt/geometry.hpp"

using namespace pmchwt;
using namespace pmchwt::fields;
using operators::Material;

namespace {

std::vector<double> load_rcs(const std::string& name) {
  std::ifstream in(std::string(PMCHWT_TEST_DATA) + "/" + name);
  REQUIRE(in);
  std::string line;
  std::getline(in, line);
  std::vector<double> rcs;
  while (std::getline(in, line)) rcs.push_back(std::stod(line.substr(line.find(',') + 1)));
  return rcs;
}

formulations::Problem background_sphere(double h) {
  return formulations::build_problem(geometry::make_split_sphere(h, geometry::SphereSplit::none),
                                     {Material::vacuum(), Material::vacuum()}, 2.0, false);
}

double max_relative(const std::vector<CVec3>& a, const std::vector<CVec3>& b) {
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    err = std::max(err, (a[i] - b[i]).norm());
    ref = std::max(ref, b[i].norm());
  }
  return err / ref;
}

}  // namespace

TEST_CASE("E-plane directions") {
  const auto d = e_plane(181);
  REQUIRE(d.size() == 181);
  CHECK(d.front().unit().isApprox(Vec3(0, 0, 1)));
  CHECK((d.back().unit() - Vec3(0, 0, -1)).norm() < 1e-15);
  CHECK(std::abs(d[90].unit().y()) < 1e-15);
}

TEST_CASE("Mie series matches the independent oracle") {
  const auto sphere = Material::relative(3.0, 1.0);
  for (const auto& [kappa, file] : {std::pair{2.0, "mie_eps3_k2.csv"}, std::pair{6.0, "mie_eps3_k6.csv"}}) {
    const auto ref = load_rcs(file);
    const auto got = mie_rcs(1.0, sphere, Material::vacuum(), kappa, e_plane(181));
    REQUIRE(got.rcs.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(got.rcs[i] == doctest::Approx(ref[i]).epsilon(1e-8));
  }
}

TEST_CASE("Mie series vanishes without contrast and is converged at the truncation") {
  const auto none = mie_rcs(1.0, Material::vacuum(), Material::vacuum(), 3.0, e_plane(37));
  for (double s : none.rcs) CHECK(s < 1e-20);
  const auto sphere = Material::relative(3.0, 1.0);
  MieOptions more;
  more.extra_terms = 5;
  const auto a = mie_rcs(1.0, sphere, Material::vacuum(), 6.0, e_plane(181));
  const auto b = mie_rcs(1.0, sphere, Material::vacuum(), 6.0, e_plane(181), more);
  CHECK(relative_l2(a.rcs, b.rcs) < 1e-8);
  CHECK(mie_truncation(8.0) == 18);
}

TEST_CASE("relative L2 distance") {
  CHECK(relative_l2({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(relative_l2({2.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK_THROWS(relative_l2({1.0}, {1.0, 2.0}));
}

TEST_CASE("far field is linear in the traces") {
  const auto p = background_sphere(0.5);
  const auto& sp = p.rwg.domains[0];
  const auto dirs = e_plane(19);
  const VectorXc zero = VectorXc::Zero(2 * sp.size());
  for (double s : far_field(sp, zero, 2.0, 1.0, dirs).rcs) CHECK(s == 0.0);
  const VectorXc x = VectorXc::Random(2 * sp.size());
  const auto a = far_field(sp, x, 2.0, 1.0, dirs);
  const auto b = far_field(sp, cplx(0.0, 2.0) * x, 2.0, 1.0, dirs);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    CHECK((b.amplitude[i] - cplx(0.0, 2.0) * a.amplitude[i]).norm() < 1e-12 * (1.0 + a.amplitude[i].norm()));
    CHECK(std::abs(pmchwt::dot(a.amplitude[i], dirs[i].unit())) < 1e-12 * (1.0 + a.amplitude[i].norm()));
  }
}

TEST_CASE("incident traces radiate nothing outside a background sphere") {
  const auto p = background_sphere(0.3);
  operators::PlaneWave pw;
  const VectorXc u = incident_interpolant(p, pw);
  const auto ff = far_field(p.rwg.domains[0], domain_traces(p.rwg, u, 0), 2.0, 1.0, e_plane(37));
  for (double s : ff.rcs) CHECK(s < 1e-4);
}

TEST_CASE("Stratton-Chu reproduces the incident wave inside and outside") {
  const auto p = background_sphere(0.3);
  operators::PlaneWave pw;
  const VectorXc u = incident_interpolant(p, pw);
  const std::vector<Vec3> inside{Vec3(0, 0, 0), Vec3(0.3, -0.2, 0.1), Vec3(-0.2, 0.1, 0.4)};
  const std::vector<Vec3> outside{Vec3(0, 0, 2.5), Vec3(2.0, 1.0, 0.0), Vec3(-1.5, 0.5, -2.0)};
  std::vector<CVec3> e_in, h_in, e_out;
  for (const auto& x : inside) {
    e_in.push_back(pw.e(x, 2.0));
    h_in.push_back(pw.h(x, 2.0, 1.0));
  }
  for (const auto& x : outside) e_out.push_back(pw.e(x, 2.0));
  const auto in = stratton_chu(p, 1, domain_traces(p.rwg, u, 1), inside, pw);
  CHECK(max_relative(in.e, e_in) < 0.05);
  CHECK(max_relative(in.h, h_in) < 0.05);
  const auto out = stratton_chu(p, 0, domain_traces(p.rwg, u, 0), outside, pw);
  CHECK(max_relative(out.e, e_out) < 0.01);
}

TEST_CASE("energy norm is a norm") {
  const auto p = background_sphere(0.5);
  const auto e = operators::assemble_energy(p.rwg, 2.0);
  const VectorXc x = VectorXc::Random(p.rwg.size()), y = VectorXc::Random(p.rwg.size());
  CHECK(energy_norm(VectorXc::Zero(p.rwg.size()), p.rwg, e) == 0.0);
  CHECK(energy_norm(x, p.rwg, e) > 0.0);
  CHECK(energy_norm(cplx(0.0, -3.0) * x, p.rwg, e) == doctest::Approx(3.0 * energy_norm(x, p.rwg, e)));
  CHECK(energy_norm(x + y, p.rwg, e) <= energy_norm(x, p.rwg, e) + energy_norm(y, p.rwg, e) + 1e-12);
}

TEST_CASE("transfer onto the same mesh is the identity") {
  const auto p = background_sphere(0.5);
  const auto& sp = p.rwg.domains[1];
  const VectorXc x = VectorXc::Random(sp.size());
  CHECK((transfer(sp, x, sp) - x).norm() < 1e-10 * x.norm());
}

TEST_CASE("transfer to a finer mesh keeps the incident interpolant") {
  // flat faces, so both meshes cover the same polyhedron
  auto cubes = [](double h) {
    return formulations::build_problem(geometry::make_two_cubes(h), std::vector<Material>(3), 2.0, false);
  };
  const auto coarse = cubes(0.5);
  const auto fine = cubes(0.25);
  operators::PlaneWave pw;
  const VectorXc moved = transfer(coarse.rwg, incident_interpolant(coarse, pw), fine.rwg);
  const VectorXc exact = incident_interpolant(fine, pw);
  const auto e = operators::assemble_energy(fine.rwg, 2.0);
  CHECK(energy_norm(moved - exact, fine.rwg, e) < 0.2 * energy_norm(exact, fine.rwg, e));
}

TEST_CASE("evaluating a basis function recovers its edge flux") {
  const auto p = background_sphere(0.5);
  const auto& sp = p.rwg.domains[1];
  VectorXc c = VectorXc::Zero(sp.size());
  c[7] = 1.0;
  const auto ex = sp.expand(c);
  VectorXc back = spaces::interpolate_flux(sp, [&](const Vec3& x, const Vec3& t) -> cplx {
    // evaluate on either adjacent support triangle; the normal flux is continuous
    for (std::size_t k = 0; k < sp.support->size(); ++k) {
      const auto& g = sp.support->tris[k];
      const Vec3 bary = Eigen::Matrix3d((Eigen::Matrix3d() << g.p[0], g.p[1], g.p[2]).finished())
                            .colPivHouseholderQr()
                            .solve(x);
      if (bary.minCoeff() > -1e-9 && std::abs(bary.sum() - 1.0) < 1e-9)
        return pmchwt::dot(pmchwt::cross(evaluate(sp, ex, static_cast<int>(k), x), g.normal.cast<cplx>()),
                           t.cast<cplx>());
    }
    return 0.0;
  });
  CHECK(std::abs(back[7] - 1.0) < 1e-10);
  back[7] = 0.0;
  CHECK(back.norm() < 1e-10);
}

TEST_CASE("VTK writers produce legacy files") {
  const auto p = background_sphere(0.5);
  const std::string path = "test_surface.vtk";
  write_surface_vtk(path, p.rwg.domains[0], VectorXc::Zero(2 * p.rwg.dim(0)));
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# vtk DataFile", 0) == 0);
}
