#pragma once

#include "pmchwt/quadrature.hpp"

namespace pmchwt::spaces {

template <class F>
VectorXc interpolate_flux(const TraceSpace& rwg, F&& crossing) {
  const auto g = quadrature::gauss_legendre(6);
  VectorXc c(rwg.size());
  for (int d = 0; d < rwg.size(); ++d) {
    const auto& e = rwg.edges.edges[rwg.dof_edge[d]];
    const Vec3& a = rwg.surface->vertices[e.v[0]];
    const Vec3& b = rwg.surface->vertices[e.v[1]];
    const double len = (b - a).norm();
    const Vec3 t = (b - a) / len;
    cplx s = 0.0;
    for (std::size_t q = 0; q < g.x.size(); ++q) s += g.w[q] * crossing(Vec3(a + g.x[q] * (b - a)), t);
    c[d] = s * len;
  }
  return c;
}

}  // namespace pmchwt::spaces
