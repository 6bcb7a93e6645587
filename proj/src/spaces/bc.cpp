#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "pmchwt/spaces.hpp"

namespace pmchwt::spaces {

namespace {

using geometry::Edge;
using geometry::EdgeSet;
using geometry::RefinedSurface;

struct Crossing {
  int edge;  // refined edge
  int from;  // refined triangle the flux leaves
  double flux;
};

/// Fan of children around one coarse vertex, walked across the spokes.
struct Fan {
  std::vector<int> tris;    // t_1 .. t_2N
  std::vector<int> spokes;  // s_0 .. s_2N (s_2N == s_0 for a closed fan)
  bool closed = true;
};

class FanBuilder {
 public:
  FanBuilder(const RefinedSurface& r, const EdgeSet& redges) : r_(r), redges_(redges) {
    for (std::size_t t = 0; t < r.mesh.triangles.size(); ++t) cell_[r.mesh.triangles[t][0]].push_back(static_cast<int>(t));
  }

  /// Walks the fan of coarse vertex `v` (refined-local index) starting next to spoke `start`.
  Fan build(int v, int start_spoke) const {
    const auto& children = cell_.at(v);
    std::map<int, std::vector<int>> by_spoke;
    for (int t : children)
      for (int e : spokes_of(t, v)) by_spoke[e].push_back(t);
    Fan f;
    int first_spoke = start_spoke;
    for (const auto& [e, ts] : by_spoke) {
      if (ts.size() == 1) {
        f.closed = false;
        first_spoke = e;
        break;
      }
    }
    int spoke = first_spoke;
    int t = by_spoke.at(spoke)[0];
    f.spokes.push_back(spoke);
    for (std::size_t step = 0; step < children.size(); ++step) {
      f.tris.push_back(t);
      const auto sp = spokes_of(t, v);
      const int next = sp[0] == spoke ? sp[1] : sp[0];
      f.spokes.push_back(next);
      const auto& around = by_spoke.at(next);
      if (around.size() == 1) break;
      const int nt = around[0] == t ? around[1] : around[0];
      spoke = next;
      t = nt;
    }
    if (f.tris.size() != children.size() || (f.closed && f.spokes.back() != f.spokes.front()))
      throw std::runtime_error("bc_space: vertex fan is not a simple cycle or path");
    if (f.closed && first_spoke != start_spoke) throw std::logic_error("bc_space: fan start");
    return f;
  }

  /// The two refined edges of child t that contain vertex v.
  std::array<int, 2> spokes_of(int t, int v) const {
    std::array<int, 2> out{-1, -1};
    int n = 0;
    const auto& tri = r_.mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] == v) continue;  // edge opposite v does not contain v
      out[n++] = redges_.triangle_edges[t][k];
    }
    return out;
  }

  int outer_edge(int t, int v) const {
    const auto& tri = r_.mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
      if (tri[k] == v) return redges_.triangle_edges[t][k];
    throw std::logic_error("outer_edge");
  }

 private:
  const RefinedSurface& r_;
  const EdgeSet& redges_;
  std::unordered_map<int, std::vector<int>> cell_;
};

}  // namespace

TraceSpace bc_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> surface, const EdgeSet& edges,
                    std::shared_ptr<const RefinedSurface> refinement) {
  const auto& rm = refinement->mesh;
  const EdgeSet redges = geometry::edge_enumeration(rm);
  std::unordered_map<PointId, int> rlocal;
  for (std::size_t v = 0; v < rm.ids.size(); ++v) rlocal.emplace(rm.ids[v], static_cast<int>(v));
  std::map<std::pair<int, int>, int> redge_of;
  for (std::size_t e = 0; e < redges.edges.size(); ++e)
    redge_of[{redges.edges[e].v[0], redges.edges[e].v[1]}] = static_cast<int>(e);
  auto find_edge = [&](int a, int b) {
    if (rm.ids[a] > rm.ids[b]) std::swap(a, b);
    auto it = redge_of.find({a, b});
    if (it == redge_of.end()) throw std::logic_error("bc_space: refined edge not found");
    return it->second;
  };

  FanBuilder fans(*refinement, redges);
  TraceSpace sp;
  sp.flavour = Flavour::bc;
  sp.edges = edges;
  sp.refinement = refinement;
  sp.support = std::make_shared<SurfaceGeometry>(make_geometry(rm));
  sp.parent = refinement->parent;
  sp.terms.assign(rm.triangles.size(), {});
  sp.dof_edge = edges.interior;

  for (int d = 0; d < static_cast<int>(sp.dof_edge.size()); ++d) {
    const Edge& ce = edges.edges[sp.dof_edge[d]];
    const PointId lo = surface->ids[ce.v[0]], hi = surface->ids[ce.v[1]];
    const int c = rlocal.at(geometry::midpoint_id(lo, hi));
    std::vector<Crossing> cross;
    // flux 1/2 through each half of the dual edge, from the hi cell into the lo cell
    for (int side = 0; side < 2; ++side) {
      const auto& ct = surface->triangles[ce.tri[side]];
      const int b = rlocal.at(geometry::barycenter_id(surface->ids[ct[0]], surface->ids[ct[1]], surface->ids[ct[2]]));
      const int e = find_edge(c, b);
      const Edge& re = redges.edges[e];
      const int t0 = re.tri[0], t1 = re.tri[1];
      const int from = rm.ids[rm.triangles[t0][0]] == hi ? t0 : t1;
      cross.push_back({e, from, 0.5});
    }
    for (int end = 0; end < 2; ++end) {
      const PointId vid = end == 0 ? hi : lo;
      const double charge = end == 0 ? 1.0 : -1.0;
      const int v = rlocal.at(vid);
      const Fan fan = fans.build(v, find_edge(v, c));
      const int n2 = static_cast<int>(fan.tris.size());
      const double q = charge / n2;
      double phi = 0.0;
      for (int k = 0; k < n2; ++k) {
        const int t = fan.tris[k];
        const auto& re = redges.edges[fans.outer_edge(t, v)];
        const bool touches_c = re.v[0] == c || re.v[1] == c;
        const double out = touches_c ? 0.5 * charge : 0.0;
        phi += q - out;
        const int spoke = fan.spokes[k + 1];
        const bool last = k + 1 == n2;
        if (last) {
          if (std::abs(phi) > 1e-12) {
            std::ostringstream msg;
            msg << "bc_space: flux balance failed at vertex " << vid << " (residual " << phi << ")";
            throw std::runtime_error(msg.str());
          }
          break;
        }
        cross.push_back({spoke, t, phi});
      }
    }
    for (const auto& x : cross) {
      if (x.flux == 0.0) continue;
      const Edge& re = redges.edges[x.edge];
      if (!re.interior()) throw std::logic_error("bc_space: flux through a boundary edge");
      const double coef = x.from == re.tri[0] ? x.flux : -x.flux;
      for (int side = 0; side < 2; ++side) {
        const int t = re.tri[side];
        const int corner = rm.triangles[t][re.opposite[side]];
        const int k = sp.support->tris[t].slot_of(corner);
        const double value = side == 0 ? coef : -coef;
        auto& terms = sp.terms[t];
        auto it = std::find_if(terms.begin(), terms.end(), [&](const ShapeTerm& s) { return s.dof == d && s.k == k; });
        if (it == terms.end())
          terms.push_back({d, k, value});
        else
          it->coef += value;
      }
    }
  }
  sp.surface = std::move(surface);
  return sp;
}

TraceSpace bc_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> surface) {
  const auto edges = geometry::edge_enumeration(*surface);
  auto ref = std::make_shared<geometry::RefinedSurface>(geometry::barycentric_refine(*surface));
  return bc_space(std::move(surface), edges, std::move(ref));
}

}  // namespace pmchwt::spaces
