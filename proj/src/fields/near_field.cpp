#include <stdexcept>

#include "pmchwt/fields.hpp"
#include "pmchwt/parallel.hpp"
#include "pmchwt/quadrature.hpp"

namespace pmchwt::fields {

NearFieldSample stratton_chu(const formulations::Problem& p, int d, const VectorXc& traces,
                             const std::vector<Vec3>& points, const operators::PlaneWave& pw) {
  if (d < 0 || d >= static_cast<int>(p.rwg.domains.size())) throw std::invalid_argument("stratton_chu: bad domain");
  const auto& sp = p.rwg.domains[d];
  const int n = sp.size();
  if (traces.size() != 2 * n) throw std::invalid_argument("stratton_chu: trace vector size mismatch");
  const cplx kappa = p.kappa(d), eta = p.eta(d);
  const auto em = sp.expand(VectorXc(traces.head(n)));
  const auto ej = sp.expand(VectorXc(traces.tail(n)));

  struct Sample {
    Vec3 y;
    CVec3 m, j;
    cplx div_m, div_j;
  };
  std::vector<Sample> samples;
  const auto& rule = quadrature::triangle_rule(6);
  for (std::size_t t = 0; t < sp.support->size(); ++t) {
    if (sp.terms[t].empty()) continue;
    const auto& g = sp.support->tris[t];
    const cplx dm = (em[t][0] + em[t][1] + em[t][2]) / g.area;
    const cplx dj = (ej[t][0] + ej[t][1] + ej[t][2]) / g.area;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 y = g.point(rule.bary[q]);
      const double w = rule.w[q] * g.area;
      samples.push_back({y, w * evaluate(sp, em, static_cast<int>(t), y), w * evaluate(sp, ej, static_cast<int>(t), y),
                         w * dm, w * dj});
    }
  }

  NearFieldSample out;
  out.points = points;
  out.e.resize(points.size());
  out.h.resize(points.size());
  parallel::for_each(0, points.size(), [&](std::size_t i) {
    const Vec3& x = points[i];
    CVec3 sm = CVec3::Zero(), sj = CVec3::Zero(), gdm = CVec3::Zero(), gdj = CVec3::Zero(), cm = CVec3::Zero(),
          cj = CVec3::Zero();
    for (const auto& s : samples) {
      const Vec3 r = x - s.y;
      const double rn = r.norm();
      const cplx g = std::exp(-kI * kappa * rn) / (4.0 * kPi * rn);
      const CVec3 grad = (-(1.0 + kI * kappa * rn) * g / (rn * rn)) * r.cast<cplx>();
      sm += g * s.m;
      sj += g * s.j;
      gdm += grad * s.div_m;
      gdj += grad * s.div_j;
      cm += cross(grad, s.m);
      cj += cross(grad, s.j);
    }
    // interior representation: the data radiate with sources -j / eta0 and -m
    out.e[i] = kI * kappa * eta * sj - eta / (kI * kappa) * gdj + cm;
    out.h[i] = kI * kappa / eta * sm - 1.0 / (kI * kappa * eta) * gdm - cj;
    if (d == 0) {
      out.e[i] += pw.e(x, p.kappa(0));
      out.h[i] += pw.h(x, p.kappa(0), p.eta(0));
    }
  });
  return out;
}

}  // namespace pmchwt::fields
