#include <sstream>
#include <unordered_map>

#include "pmchwt/geometry.hpp"

namespace pmchwt::geometry {

ReducedGeometry reduce_geometry(const SkeletonMesh& mesh, const OwnerOverrides& overrides) {
  ReducedGeometry r;
  const int nd = mesh.domain_count;
  r.triangle_owner.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const int lo = std::min(mesh.adjacency[t][0], mesh.adjacency[t][1]);
    const int hi = std::max(mesh.adjacency[t][0], mesh.adjacency[t][1]);
    int owner = lo;  // greedy by ascending domain index
    if (auto it = overrides.find({lo, hi}); it != overrides.end()) {
      if (it->second != lo && it->second != hi) {
        std::ostringstream msg;
        msg << "override assigns interface (" << lo << ", " << hi << ") to non-adjacent domain " << it->second;
        throw GeometryError(msg.str());
      }
      owner = it->second;
    }
    r.triangle_owner[t] = owner;
  }

  r.surfaces.resize(nd);
  std::vector<std::unordered_map<int, int>> local(nd);
  for (int d = 0; d < nd; ++d) r.surfaces[d].domain = d;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const int d = r.triangle_owner[t];
    auto& s = r.surfaces[d];
    auto vid = [&](int g) {
      auto it = local[d].find(g);
      if (it != local[d].end()) return it->second;
      const int id = static_cast<int>(s.vertices.size());
      local[d].emplace(g, id);
      s.vertices.push_back(mesh.vertices[g]);
      s.ids.push_back(g);
      return id;
    };
    const auto& tri = mesh.triangles[t];
    if (mesh.adjacency[t][1] == d)
      s.triangles.push_back({vid(tri[0]), vid(tri[1]), vid(tri[2])});
    else
      s.triangles.push_back({vid(tri[0]), vid(tri[2]), vid(tri[1])});
    s.source.push_back(static_cast<int>(t));
  }

  const auto edges = skeleton_edges(mesh);
  r.edge_owner.assign(edges.size(), -1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::vector<int> count(nd, 0);
    for (int t : edges[e].triangles) ++count[r.triangle_owner[t]];
    int owners = 0;
    for (int d = 0; d < nd; ++d) {
      if (count[d] > 2) {
        std::ostringstream msg;
        msg << "reduced surface of domain " << d << " is non-manifold at edge (" << edges[e].a << ", " << edges[e].b
            << ")";
        throw GeometryError(msg.str());
      }
      if (count[d] == 2) {
        ++owners;
        r.edge_owner[e] = d;
      }
    }
    if (owners != 1) {
      std::ostringstream msg;
      msg << "edge (" << edges[e].a << ", " << edges[e].b << ") is interior to " << owners
          << " reduced surfaces; supply an override";
      throw GeometryError(msg.str());
    }
  }
  for (auto& s : r.surfaces)
    if (!s.triangles.empty()) edge_enumeration(s);  // orientation consistency check
  return r;
}

}  // namespace pmchwt::geometry
