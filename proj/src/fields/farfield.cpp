#include <stdexcept>

#include "pmchwt/fields.hpp"
#include "pmchwt/quadrature.hpp"

namespace pmchwt::fields {

CVec3 evaluate(const spaces::TraceSpace& sp, const std::vector<std::array<cplx, 3>>& expanded, int t, const Vec3& x) {
  const auto& g = sp.support->tris[t];
  CVec3 v = CVec3::Zero();
  for (int k = 0; k < 3; ++k) v += expanded[t][k] * ((x - g.p[k]) / (2.0 * g.area)).cast<cplx>();
  return v;
}

VectorXc domain_traces(const spaces::MultiTraceSpace& space, const VectorXc& u, int d) {
  if (u.size() != space.size()) throw std::invalid_argument("domain_traces: vector size mismatch");
  return u.segment(space.block(d), 2 * space.dim(d));
}

FarFieldPattern far_field(const spaces::TraceSpace& rwg0, const VectorXc& traces, double kappa0, cplx eta0,
                          const std::vector<Direction>& directions) {
  const int n = rwg0.size();
  if (traces.size() != 2 * n) throw std::invalid_argument("far_field: trace vector size mismatch");
  const auto em = rwg0.expand(VectorXc(traces.head(n)));
  const auto ej = rwg0.expand(VectorXc(traces.tail(n)));
  const auto& tris = rwg0.support->tris;

  // quadrature points with the equivalent-current bracket pieces
  struct Sample {
    Vec3 y;
    CVec3 m, j;
  };
  std::vector<Sample> samples;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    if (rwg0.terms[t].empty()) continue;
    const auto& g = tris[t];
    const auto& rule = quadrature::triangle_rule(kappa0 * 2.0 * g.radius < 1.0 ? 4 : 6);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 y = g.point(rule.bary[q]);
      const double w = rule.w[q] * g.area;
      samples.push_back({y, w * evaluate(rwg0, em, static_cast<int>(t), y), w * evaluate(rwg0, ej, static_cast<int>(t), y)});
    }
  }

  FarFieldPattern out;
  out.directions = directions;
  out.amplitude.resize(directions.size());
  out.rcs.resize(directions.size());
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const Vec3 r = directions[i].unit();
    // sources J = -j_0 / eta0, M = -m_0 radiate the scattered field into domain 0
    CVec3 acc = CVec3::Zero();
    for (const auto& s : samples) {
      const cplx ph = std::exp(kI * kappa0 * r.dot(s.y));
      const CVec3 jt = s.j - r.cast<cplx>() * dot(r, s.j);
      acc += ph * (-eta0 * jt + cross(r, s.m));
    }
    out.amplitude[i] = -kI * kappa0 / (4.0 * kPi) * acc;
    out.rcs[i] = 4.0 * kPi * out.amplitude[i].squaredNorm();
  }
  return out;
}

FarFieldPattern far_field(const formulations::Problem& p, const VectorXc& w, const std::vector<Direction>& directions) {
  const VectorXc u = p.R.apply(w);
  return far_field(p.rwg.domains[0], domain_traces(p.rwg, u, 0), p.kappa0, p.eta(0), directions);
}

}  // namespace pmchwt::fields
