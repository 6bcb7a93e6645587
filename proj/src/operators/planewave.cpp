#include <stdexcept>

#include "pmchwt/operators.hpp"
#include "pmchwt/quadrature.hpp"

namespace pmchwt::operators {

void PlaneWave::validate() const {
  if (std::abs(direction.norm() - 1.0) > 1e-12) throw std::invalid_argument("plane wave direction must be a unit vector");
  if (std::abs(polarization.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("plane wave polarization must be a unit vector");
  if (std::abs(direction.dot(polarization)) > 1e-12)
    throw std::invalid_argument("plane wave polarization must be orthogonal to the direction");
}

CVec3 PlaneWave::e(const Vec3& x, cplx kappa) const {
  return amplitude * std::exp(-kI * kappa * direction.dot(x)) * polarization.cast<cplx>();
}

CVec3 PlaneWave::h(const Vec3& x, cplx kappa, cplx eta) const {
  return cross(direction, e(x, kappa)) / eta;
}

VectorXc planewave_traces(const spaces::TraceSpace& rwg, const PlaneWave& pw, cplx kappa, cplx eta) {
  if (rwg.flavour != spaces::Flavour::rwg) throw std::invalid_argument("planewave_traces: needs an RWG space");
  pw.validate();
  const int n = rwg.size();
  VectorXc c(2 * n);
  // (m x n) . t = -e . t and (j x n) . t = h . t
  c.head(n) = spaces::interpolate_flux(rwg, [&](const Vec3& x, const Vec3& t) {
    return -dot(t, pw.e(x, kappa));
  });
  c.tail(n) = spaces::interpolate_flux(rwg, [&](const Vec3& x, const Vec3& t) {
    return dot(t, pw.h(x, kappa, eta));
  });
  return c;
}

VectorXc planewave_rhs(const spaces::MultiTraceSpace& space, const PlaneWave& pw, double kappa0) {
  pw.validate();
  VectorXc rhs = VectorXc::Zero(space.size());
  if (space.domains.empty()) return rhs;
  const auto& sp = space.domains[0];
  if (sp.flavour != spaces::Flavour::rwg) throw std::invalid_argument("planewave_rhs: needs RWG spaces");
  for (std::size_t t = 0; t < sp.support->size(); ++t) {
    const auto& g = sp.support->tris[t];
    const double osc = kappa0 * 2.0 * g.radius;
    const auto& rule = quadrature::triangle_rule(osc < 1.0 ? 4 : osc < 2.0 ? 5 : 8);
    std::array<cplx, 3> pm{}, pj{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 x = g.point(rule.bary[q]);
      const CVec3 m = cross(pw.e(x, kappa0), g.normal);
      const CVec3 j = cross(g.normal, pw.h(x, kappa0, 1.0));
      for (int k = 0; k < 3; ++k) {
        const Vec3 f = g.normal.cross((x - g.p[k]) / (2.0 * g.area));
        pm[k] += rule.w[q] * dot(f, m);
        pj[k] += rule.w[q] * dot(f, j);
      }
    }
    for (const auto& term : sp.terms[t]) {
      rhs[space.index(0, 0, term.dof)] += term.coef * g.area * pm[term.k];
      rhs[space.index(0, 1, term.dof)] += term.coef * g.area * pj[term.k];
    }
  }
  return rhs;
}

}  // namespace pmchwt::operators
