#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pmchwt/geometry.hpp"

namespace pmchwt::geometry {

namespace {

constexpr int kIdBits = 20;
constexpr PointId kIdMask = (PointId{1} << kIdBits) - 1;

struct PairHash {
  std::size_t operator()(const std::pair<PointId, PointId>& p) const {
    return std::hash<PointId>()(p.first * 1000003 + p.second);
  }
};

}  // namespace

std::tuple<PointId, PointId, int> orient(PointId a, PointId b) {
  if (a < b) return {a, b, 1};
  return {b, a, -1};
}

PointId midpoint_id(PointId a, PointId b) {
  if (a > kIdMask || b > kIdMask) throw GeometryError("midpoint_id: only base vertex ids can be combined");
  if (a > b) std::swap(a, b);
  return (PointId{1} << 60) | (a << kIdBits) | b;
}

PointId barycenter_id(PointId a, PointId b, PointId c) {
  if (a > kIdMask || b > kIdMask || c > kIdMask)
    throw GeometryError("barycenter_id: only base vertex ids can be combined");
  std::array<PointId, 3> s{a, b, c};
  std::sort(s.begin(), s.end());
  return (PointId{2} << 60) | (s[0] << (2 * kIdBits)) | (s[1] << kIdBits) | s[2];
}

Vec3 OrientedSurfaceMesh::normal(int t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[1]] - vertices[tri[0]]).cross(vertices[tri[2]] - vertices[tri[0]]).normalized();
}

double OrientedSurfaceMesh::area(int t) const {
  const auto& tri = triangles[t];
  return 0.5 * (vertices[tri[1]] - vertices[tri[0]]).cross(vertices[tri[2]] - vertices[tri[0]]).norm();
}

double OrientedSurfaceMesh::total_area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += area(static_cast<int>(t));
  return a;
}

double signed_volume(const OrientedSurfaceMesh& s) {
  double v = 0.0;
  for (const auto& t : s.triangles) v += s.vertices[t[0]].dot(s.vertices[t[1]].cross(s.vertices[t[2]]));
  return v / 6.0;
}

OrientedSurfaceMesh make_surface(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles) {
  OrientedSurfaceMesh s;
  s.ids.resize(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) s.ids[i] = static_cast<PointId>(i);
  s.vertices = std::move(vertices);
  s.source.assign(triangles.size(), -1);
  s.triangles = std::move(triangles);
  return s;
}

std::vector<SkeletonEdge> skeleton_edges(const SkeletonMesh& mesh) {
  std::map<std::pair<int, int>, std::vector<int>> m;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      m[{a, b}].push_back(static_cast<int>(t));
    }
  }
  std::vector<SkeletonEdge> out;
  out.reserve(m.size());
  for (auto& [key, tris] : m) out.push_back({key.first, key.second, std::move(tris)});
  return out;
}

int domains_at_edge(const SkeletonMesh& mesh, const SkeletonEdge& edge) {
  std::set<int> d;
  for (int t : edge.triangles) {
    d.insert(mesh.adjacency[t][0]);
    d.insert(mesh.adjacency[t][1]);
  }
  return static_cast<int>(d.size());
}

OrientedSurfaceMesh build_domain_boundary(const SkeletonMesh& mesh, int domain) {
  if (domain < 0 || domain >= mesh.domain_count)
    throw GeometryError("build_domain_boundary: domain " + std::to_string(domain) + " out of range");
  OrientedSurfaceMesh s;
  s.domain = domain;
  std::unordered_map<int, int> local;
  auto vid = [&](int g) {
    auto it = local.find(g);
    if (it != local.end()) return it->second;
    int id = static_cast<int>(s.vertices.size());
    local.emplace(g, id);
    s.vertices.push_back(mesh.vertices[g]);
    s.ids.push_back(g);
    return id;
  };
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& adj = mesh.adjacency[t];
    if (adj[1] == domain) {
      s.triangles.push_back({vid(tri[0]), vid(tri[1]), vid(tri[2])});
    } else if (adj[0] == domain) {
      s.triangles.push_back({vid(tri[0]), vid(tri[2]), vid(tri[1])});
    } else {
      continue;
    }
    s.source.push_back(static_cast<int>(t));
  }
  if (s.triangles.empty()) throw GeometryError("domain " + std::to_string(domain) + " has no boundary triangles");
  EdgeSet e = edge_enumeration(s);
  if (!e.closed()) {
    for (const Edge& x : e.edges) {
      if (!x.interior()) {
        std::ostringstream msg;
        msg << "boundary of domain " << domain << " is not watertight at edge (" << s.ids[x.v[0]] << ", "
            << s.ids[x.v[1]] << ")";
        throw GeometryError(msg.str());
      }
    }
  }
  return s;
}

EdgeSet edge_enumeration(const OrientedSurfaceMesh& s) {
  struct Incidence {
    int tri, corner;
    bool ccw;  // lo -> hi appears in oriented order
  };
  std::unordered_map<std::pair<PointId, PointId>, std::vector<Incidence>, PairHash> m;
  std::unordered_map<std::pair<PointId, PointId>, std::array<int, 2>, PairHash> verts;
  m.reserve(s.triangles.size() * 2);
  for (std::size_t t = 0; t < s.triangles.size(); ++t) {
    const auto& tri = s.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      auto [lo, hi, sign] = orient(s.ids[a], s.ids[b]);
      m[{lo, hi}].push_back({static_cast<int>(t), k, sign > 0});
      verts[{lo, hi}] = sign > 0 ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
    }
  }
  std::vector<std::pair<PointId, PointId>> keys;
  keys.reserve(m.size());
  for (const auto& kv : m) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());

  EdgeSet out;
  out.edges.reserve(keys.size());
  out.triangle_edges.assign(s.triangles.size(), {-1, -1, -1});
  for (const auto& key : keys) {
    const auto& inc = m[key];
    Edge e;
    e.v = verts[key];
    if (inc.size() > 2) {
      std::ostringstream msg;
      msg << "non-manifold edge (" << key.first << ", " << key.second << ") with " << inc.size() << " triangles";
      throw GeometryError(msg.str());
    }
    if (inc.size() == 1) {
      e.tri = {inc[0].tri, -1};
      e.opposite = {inc[0].corner, -1};
    } else {
      if (inc[0].ccw == inc[1].ccw) {
        std::ostringstream msg;
        msg << "inconsistent orientation at edge (" << key.first << ", " << key.second << ")";
        throw GeometryError(msg.str());
      }
      const Incidence& minus = inc[0].ccw ? inc[0] : inc[1];
      const Incidence& plus = inc[0].ccw ? inc[1] : inc[0];
      e.tri = {plus.tri, minus.tri};
      e.opposite = {plus.corner, minus.corner};
    }
    const int idx = static_cast<int>(out.edges.size());
    for (const auto& i : inc) out.triangle_edges[i.tri][i.corner] = idx;
    if (e.interior()) out.interior.push_back(idx);
    out.edges.push_back(e);
  }
  return out;
}

RefinedSurface barycentric_refine(const OrientedSurfaceMesh& s) {
  RefinedSurface r;
  auto& m = r.mesh;
  m.domain = s.domain;
  std::unordered_map<PointId, int> local;
  auto add = [&](PointId id, const Vec3& p) {
    auto it = local.find(id);
    if (it != local.end()) return it->second;
    const int v = static_cast<int>(m.vertices.size());
    local.emplace(id, v);
    m.vertices.push_back(p);
    m.ids.push_back(id);
    return v;
  };
  for (std::size_t v = 0; v < s.vertices.size(); ++v) add(s.ids[v], s.vertices[v]);
  m.triangles.reserve(6 * s.triangles.size());
  for (std::size_t t = 0; t < s.triangles.size(); ++t) {
    const auto& tri = s.triangles[t];
    std::array<int, 3> sorted = tri;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) { return s.ids[a] < s.ids[b]; });
    const Vec3 g = (s.vertices[sorted[0]] + s.vertices[sorted[1]] + s.vertices[sorted[2]]) / 3.0;
    const int gc = add(barycenter_id(s.ids[tri[0]], s.ids[tri[1]], s.ids[tri[2]]), g);
    std::array<int, 3> mid{};  // mid[k] on edge (corner k, corner k+1)
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (s.ids[a] > s.ids[b]) std::swap(a, b);
      mid[k] = add(midpoint_id(s.ids[a], s.ids[b]), 0.5 * (s.vertices[a] + s.vertices[b]));
    }
    for (int k = 0; k < 3; ++k) {
      const int c = local.at(s.ids[tri[k]]);
      m.triangles.push_back({c, mid[k], gc});
      m.triangles.push_back({c, gc, mid[(k + 2) % 3]});
      for (int j = 0; j < 2; ++j) {
        r.parent.push_back(static_cast<int>(t));
        r.corner.push_back(k);
        m.source.push_back(s.source.empty() ? -1 : s.source[t]);
      }
    }
  }
  return r;
}

void validate(const SkeletonMesh& mesh) {
  if (mesh.triangles.size() != mesh.adjacency.size())
    throw GeometryError("adjacency count does not match triangle count");
  const int nv = static_cast<int>(mesh.vertices.size());
  double scale = 0.0;
  for (const auto& v : mesh.vertices) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  scale = std::max(scale, 1e-300);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) {
        std::ostringstream msg;
        msg << "triangle " << t << " references vertex index " << tri[k] << " outside [0, " << nv << ")";
        throw GeometryError(msg.str());
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw GeometryError("triangle " + std::to_string(t) + " repeats a vertex");
    const double a = 0.5 * (mesh.vertices[tri[1]] - mesh.vertices[tri[0]])
                               .cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]])
                               .norm();
    if (a <= 1e-14 * scale * scale) throw GeometryError("triangle " + std::to_string(t) + " is degenerate");
    const auto& adj = mesh.adjacency[t];
    if (adj[0] == adj[1])
      throw GeometryError("triangle " + std::to_string(t) + " has equal domains on both sides");
    if (adj[0] < 0 || adj[1] < 0 || adj[0] >= mesh.domain_count || adj[1] >= mesh.domain_count)
      throw GeometryError("triangle " + std::to_string(t) + " has a domain tag out of range");
  }
  for (int d = 0; d < mesh.domain_count; ++d) {
    OrientedSurfaceMesh s = build_domain_boundary(mesh, d);
    const double vol = signed_volume(s);
    if (d > 0 && !(vol > 0.0))
      throw GeometryError("boundary of domain " + std::to_string(d) + " is not outward oriented");
  }
}

}  // namespace pmchwt::geometry
