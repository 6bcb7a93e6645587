#include <algorithm>
#include <stdexcept>

#include "pmchwt/spaces.hpp"

namespace pmchwt::spaces {

int TriangleGeom::slot_of(int local_vertex) const {
  for (int k = 0; k < 3; ++k)
    if (vertex[k] == local_vertex) return k;
  throw std::logic_error("slot_of: vertex not in triangle");
}

SurfaceGeometry make_geometry(const geometry::OrientedSurfaceMesh& s) {
  SurfaceGeometry g;
  g.tris.resize(s.triangles.size());
  for (std::size_t t = 0; t < s.triangles.size(); ++t) {
    TriangleGeom& tg = g.tris[t];
    std::array<int, 3> v = s.triangles[t];
    std::sort(v.begin(), v.end(), [&](int a, int b) { return s.ids[a] < s.ids[b]; });
    for (int k = 0; k < 3; ++k) {
      tg.vertex[k] = v[k];
      tg.id[k] = s.ids[v[k]];
      tg.p[k] = s.vertices[v[k]];
    }
    const auto& o = s.triangles[t];
    const Vec3 cr = (s.vertices[o[1]] - s.vertices[o[0]]).cross(s.vertices[o[2]] - s.vertices[o[0]]);
    tg.area = 0.5 * cr.norm();
    tg.normal = cr / cr.norm();
    tg.centroid = (tg.p[0] + tg.p[1] + tg.p[2]) / 3.0;
    tg.radius = 0.0;
    for (int k = 0; k < 3; ++k) tg.radius = std::max(tg.radius, (tg.p[k] - tg.centroid).norm());
  }
  return g;
}

TraceSpace rwg_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> surface, const geometry::EdgeSet& edges) {
  TraceSpace sp;
  sp.flavour = Flavour::rwg;
  sp.edges = edges;
  sp.support = std::make_shared<SurfaceGeometry>(make_geometry(*surface));
  sp.surface = std::move(surface);
  const auto& tris = sp.support->tris;
  sp.parent.resize(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) sp.parent[t] = static_cast<int>(t);
  sp.terms.assign(tris.size(), {});
  sp.dof_edge = edges.interior;
  for (int d = 0; d < sp.size(); ++d) {
    const auto& e = edges.edges[sp.dof_edge[d]];
    for (int side = 0; side < 2; ++side) {
      const int t = e.tri[side];
      const int corner = sp.surface->triangles[t][e.opposite[side]];
      sp.terms[t].push_back({d, tris[t].slot_of(corner), side == 0 ? 1.0 : -1.0});
    }
  }
  return sp;
}

TraceSpace rwg_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> surface) {
  const auto edges = geometry::edge_enumeration(*surface);
  return rwg_space(std::move(surface), edges);
}

namespace {
template <class T>
std::vector<std::array<T, 3>> expand_impl(const TraceSpace& sp, const Eigen::Matrix<T, Eigen::Dynamic, 1>& c) {
  if (c.size() != sp.size()) throw std::invalid_argument("expand: coefficient size mismatch");
  std::vector<std::array<T, 3>> out(sp.terms.size(), {T(0), T(0), T(0)});
  for (std::size_t t = 0; t < sp.terms.size(); ++t)
    for (const auto& term : sp.terms[t]) out[t][term.k] += term.coef * c[term.dof];
  return out;
}
}  // namespace

std::vector<std::array<cplx, 3>> TraceSpace::expand(const VectorXc& coeffs) const { return expand_impl(*this, coeffs); }

std::vector<std::array<double, 3>> TraceSpace::expand(const Eigen::VectorXd& coeffs) const {
  return expand_impl(*this, coeffs);
}

MultiTraceSpace make_multi(std::vector<TraceSpace> per_domain) {
  MultiTraceSpace m;
  m.domains = std::move(per_domain);
  m.offset.resize(m.domains.size() + 1, 0);
  for (std::size_t d = 0; d < m.domains.size(); ++d) m.offset[d + 1] = m.offset[d] + m.domains[d].size();
  return m;
}

}  // namespace pmchwt::spaces
