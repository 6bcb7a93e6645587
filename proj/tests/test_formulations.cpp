#include <doctest.h>

#include <cmath>

#include "pmchwt/fields.hpp"
#include "pmchwt/formulations.hpp"
#include "pmchwt/geometry.hpp"
#include "pmchwt/krylov.hpp"

using namespace pmchwt;
using namespace pmchwt::formulations;
using operators::Material;

namespace {

MatrixXc materialise(const krylov::Apply& op, int n) {
  MatrixXc m(n, n);
  VectorXc e = VectorXc::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.col(j) = op(e);
    e[j] = 0.0;
  }
  return m;
}

Problem sphere(double h, Material inside, double kappa0) {
  return build_problem(geometry::make_split_sphere(h, geometry::SphereSplit::none), {Material::vacuum(), inside},
                       kappa0, true);
}

}  // namespace

TEST_CASE("without junctions the system equals the preconditioned classic operator") {
  const auto p = sphere(0.4, Material::relative(3.0, 1.0), 2.0);
  const auto a = assemble_block_calderon(p);
  QlOptions opt;
  opt.delta = 0.4;
  const ComposedSystem sys(p, a, opt);
  const auto pc = make_preconditioned_classic(p, opt);
  const MatrixXc ql = materialise([&](const VectorXc& w) { return sys.apply(w); }, sys.dim());
  const MatrixXc cl =
      materialise([&](const VectorXc& w) { return apply_preconditioned_classic(pc, p, a, w); }, sys.dim());
  const double scale = cl.cwiseAbs().maxCoeff();
  CHECK(scale > 0.0);
  CHECK((ql - cl).cwiseAbs().maxCoeff() <= 1e-10 * scale);
}

TEST_CASE("system operators are linear and sized by the reduced space") {
  const auto p = sphere(0.5, Material::relative(2.0, 1.0), 1.5);
  const auto a = assemble_block_calderon(p);
  const VectorXc e_f = excitation(p, operators::PlaneWave{});
  const auto classic = classic_pmchwt(a, p.R, e_f);
  QlOptions opt;
  opt.delta = 0.5;
  const ComposedSystem sys(p, a, opt);
  const auto ql = sys.system(e_f);
  CHECK(classic.dim == p.reduced_rwg.size());
  CHECK(ql.dim == classic.dim);
  const VectorXc x = VectorXc::Random(ql.dim), y = VectorXc::Random(ql.dim);
  const cplx s(0.7, -1.2);
  for (const auto& op : {classic.apply, ql.apply}) {
    const VectorXc lhs = op(x + s * y);
    CHECK((lhs - op(x) - s * op(y)).norm() < 1e-12 * lhs.norm());
  }
}

TEST_CASE("a scatterer of background material reproduces the incident traces") {
  const auto p = sphere(0.3, Material::vacuum(), 2.0);
  const auto a = assemble_block_calderon(p);
  operators::PlaneWave pw;
  const VectorXc e_f = excitation(p, pw);
  QlOptions opt;
  opt.delta = 0.3;
  const ComposedSystem sys(p, a, opt);
  const auto s = sys.system(e_f);
  const auto [w, rep] = krylov::gmres(s.apply, s.rhs, {1e-8, 500});
  REQUIRE(rep.converged);
  const VectorXc exact = fields::incident_interpolant(p, pw);
  const auto energy = operators::assemble_energy(p.rwg, 2.0);
  const double err = fields::energy_norm(p.R.apply(w) - exact, p.rwg, energy) / fields::energy_norm(exact, p.rwg, energy);
  CHECK(err < 0.05);
}

TEST_CASE("the extinction residual of a converged solve is small") {
  const auto p = sphere(0.3, Material::relative(3.0, 1.0), 2.0);
  const auto a = assemble_block_calderon(p);
  operators::PlaneWave pw;
  const VectorXc e_f = excitation(p, pw);
  QlOptions opt;
  opt.delta = 0.3;
  const ComposedSystem sys(p, a, opt);
  const auto s = sys.system(e_f);
  const auto [w, rep] = krylov::gmres(s.apply, s.rhs, {1e-8, 500});
  REQUIRE(rep.converged);
  const auto r = extinction_residual(sys, a, p.R, w, e_f);
  const auto energy = operators::assemble_energy(p.bc, 2.0);
  const double ext = fields::energy_norm(r.v_g, p.bc, energy);
  // the residual of the trivial guess w = 0 is the excitation itself
  const auto zero = extinction_residual(sys, a, p.R, VectorXc::Zero(w.size()), e_f);
  const double ref = fields::energy_norm(zero.v_g, p.bc, energy);
  CHECK(ext < 0.2 * ref);
}

TEST_CASE("reversing the excitation sign reverses the solution") {
  const auto p = sphere(0.5, Material::relative(2.0, 1.0), 1.5);
  const auto a = assemble_block_calderon(p);
  QlOptions opt;
  opt.delta = 0.5;
  const ComposedSystem sys(p, a, opt);
  const VectorXc e_f = excitation(p, operators::PlaneWave{});
  const auto plus = sys.system(e_f);
  const auto minus = sys.system(-e_f);
  const auto [wp, rp] = krylov::gmres(plus.apply, plus.rhs, {1e-10, 500});
  const auto [wm, rm] = krylov::gmres(minus.apply, minus.rhs, {1e-10, 500});
  CHECK((wp + wm).norm() < 1e-8 * wp.norm());
}
