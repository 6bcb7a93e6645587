#include <cmath>
#include <functional>
#include <map>

#include "pmchwt/geometry.hpp"

namespace pmchwt::geometry {

int divisions(double length, double h) {
  return std::max(1, static_cast<int>(std::floor(length / h + 0.5 + 1e-9)));
}

namespace {

void check_h(double h) {
  if (!(h > 0.0) || h > 0.5) throw GeometryError("mesh size h must satisfy 0 < h <= 0.5");
}

std::vector<double> axis_nodes(const std::vector<double>& breaks, double h) {
  std::vector<double> nodes{breaks.front()};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    const int n = divisions(b - a, h);
    for (int k = 1; k <= n; ++k) nodes.push_back(k == n ? b : a + (b - a) * k / n);
  }
  return nodes;
}

/// Emits every grid face separating two different domains, split into two triangles.
SkeletonMesh box_skeleton(const std::array<std::vector<double>, 3>& nodes, const std::function<int(const Vec3&)>& dom,
                          int domain_count) {
  SkeletonMesh mesh;
  mesh.domain_count = domain_count;
  const std::array<int, 3> n{static_cast<int>(nodes[0].size()), static_cast<int>(nodes[1].size()),
                             static_cast<int>(nodes[2].size())};
  std::map<std::array<int, 3>, int> index;
  auto vertex = [&](std::array<int, 3> g) {
    auto it = index.find(g);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(mesh.vertices.size());
    index.emplace(g, id);
    mesh.vertices.emplace_back(nodes[0][g[0]], nodes[1][g[1]], nodes[2][g[2]]);
    return id;
  };
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    for (int i = 0; i < n[a]; ++i) {
      for (int j = 0; j + 1 < n[b]; ++j) {
        for (int k = 0; k + 1 < n[c]; ++k) {
          Vec3 centre;
          centre[a] = nodes[a][i];
          centre[b] = 0.5 * (nodes[b][j] + nodes[b][j + 1]);
          centre[c] = 0.5 * (nodes[c][k] + nodes[c][k + 1]);
          Vec3 off = Vec3::Zero();
          off[a] = 1e-7;
          const int dp = dom(centre + off), dm = dom(centre - off);
          if (dp == dm) continue;
          std::array<int, 3> g00{}, g10{}, g11{}, g01{};
          g00[a] = g10[a] = g11[a] = g01[a] = i;
          g00[b] = j, g00[c] = k;
          g10[b] = j + 1, g10[c] = k;
          g11[b] = j + 1, g11[c] = k + 1;
          g01[b] = j, g01[c] = k + 1;
          const int v00 = vertex(g00), v10 = vertex(g10), v11 = vertex(g11), v01 = vertex(g01);
          mesh.triangles.push_back({v00, v10, v11});
          mesh.triangles.push_back({v00, v11, v01});
          mesh.adjacency.push_back({dp, dm});
          mesh.adjacency.push_back({dp, dm});
        }
      }
    }
  }
  return mesh;
}

}  // namespace

SkeletonMesh make_two_cubes(double h) {
  check_h(h);
  const std::array<std::vector<double>, 3> nodes{axis_nodes({0.0, 1.0, 1.5}, h), axis_nodes({0.0, 0.5, 1.0}, h),
                                                 axis_nodes({0.0, 0.5, 1.0}, h)};
  auto dom = [](const Vec3& p) {
    auto in = [&](double lo, double hi, double x) { return x > lo && x < hi; };
    if (in(0.0, 1.0, p[0]) && in(0.0, 1.0, p[1]) && in(0.0, 1.0, p[2])) return 1;
    if (in(1.0, 1.5, p[0]) && in(0.0, 0.5, p[1]) && in(0.0, 0.5, p[2])) return 2;
    return 0;
  };
  SkeletonMesh mesh = box_skeleton(nodes, dom, 3);
  validate(mesh);
  return mesh;
}

SkeletonMesh make_tetrahedron() {
  SkeletonMesh mesh;
  mesh.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  mesh.triangles = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  mesh.adjacency.assign(4, {0, 1});
  mesh.domain_count = 2;
  validate(mesh);
  return mesh;
}

namespace {

/// Lattice-indexed mesh builder: every vertex is keyed by an integer triple so
/// sphere and wall pieces weld exactly along shared great circles.
struct LatticeBuilder {
  SkeletonMesh mesh;
  std::map<std::array<int, 3>, int> index;
  int n;

  int vertex(const std::array<int, 3>& key, const std::function<Vec3()>& position) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(mesh.vertices.size());
    index.emplace(key, id);
    mesh.vertices.push_back(position());
    return id;
  }

  void triangle(int a, int b, int c, const Vec3& wanted_normal, int dplus, int dminus) {
    const Vec3 nrm = (mesh.vertices[b] - mesh.vertices[a]).cross(mesh.vertices[c] - mesh.vertices[a]);
    if (nrm.dot(wanted_normal) < 0.0) std::swap(b, c);
    mesh.triangles.push_back({a, b, c});
    mesh.adjacency.push_back({dplus, dminus});
  }
};

Vec3 to_vec(const std::array<int, 3>& k) { return Vec3(k[0], k[1], k[2]); }

/// Flat wall through the origin: lattice points with |u|+|v| <= n mapped to
/// the unit disk by rescaling the L1 radius to the Euclidean radius.
Vec3 wall_position(const std::array<int, 3>& key, int n) {
  const Vec3 p = to_vec(key);
  const double l1 = std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]);
  if (l1 == 0.0) return Vec3::Zero();
  return p / p.norm() * (l1 / n);
}

}  // namespace

SkeletonMesh make_split_sphere(double h, SphereSplit split) {
  check_h(h);
  const int n = std::max(1, static_cast<int>(std::ceil(kPi / (2.0 * h) - 1e-9)));
  LatticeBuilder lb;
  lb.n = n;
  auto region = [&](const Vec3& c) {
    switch (split) {
      case SphereSplit::none: return 1;
      case SphereSplit::half: return c[2] > 0.0 ? 1 : 2;
      case SphereSplit::quadrant: return (c[0] > 0.0 && c[1] > 0.0) ? 2 : 1;
    }
    return 1;
  };
  auto sphere_vertex = [&](const std::array<int, 3>& key) {
    return lb.vertex(key, [&] { return Vec3(to_vec(key).normalized()); });
  };
  for (int sx : {1, -1}) {
    for (int sy : {1, -1}) {
      for (int sz : {1, -1}) {
        auto key = [&](int i, int j) { return std::array<int, 3>{sx * i, sy * j, sz * (n - i - j)}; };
        for (int i = 0; i < n; ++i) {
          for (int j = 0; i + j < n; ++j) {
            const int a = sphere_vertex(key(i, j)), b = sphere_vertex(key(i + 1, j)),
                      c = sphere_vertex(key(i, j + 1));
            auto emit = [&](int p, int q, int r) {
              const Vec3 cen = (lb.mesh.vertices[p] + lb.mesh.vertices[q] + lb.mesh.vertices[r]) / 3.0;
              lb.triangle(p, q, r, cen, 0, region(cen));
            };
            emit(a, b, c);
            if (i + j + 2 <= n) emit(b, sphere_vertex(key(i + 1, j + 1)), c);
          }
        }
      }
    }
  }
  // wall spanned by lattice axes u and v (unit vectors), restricted by sign masks
  auto wall = [&](int u, int v, const std::vector<int>& su, const std::vector<int>& sv, const Vec3& normal, int dplus,
                  int dminus) {
    auto wall_vertex = [&](const std::array<int, 3>& key) {
      int l1 = std::abs(key[0]) + std::abs(key[1]) + std::abs(key[2]);
      if (l1 == n) return sphere_vertex(key);
      return lb.vertex(key, [&] { return wall_position(key, n); });
    };
    for (int a : su) {
      for (int b : sv) {
        auto key = [&](int i, int j) {
          std::array<int, 3> k{0, 0, 0};
          k[u] = a * i;
          k[v] = b * j;
          return k;
        };
        for (int i = 0; i < n; ++i) {
          for (int j = 0; i + j < n; ++j) {
            const int p = wall_vertex(key(i, j)), q = wall_vertex(key(i + 1, j)), r = wall_vertex(key(i, j + 1));
            lb.triangle(p, q, r, normal, dplus, dminus);
            if (i + j + 2 <= n) lb.triangle(q, wall_vertex(key(i + 1, j + 1)), r, normal, dplus, dminus);
          }
        }
      }
    }
  };
  int domains = 2;
  if (split == SphereSplit::half) {
    wall(0, 1, {1, -1}, {1, -1}, Vec3::UnitZ(), 1, 2);
    domains = 3;
  } else if (split == SphereSplit::quadrant) {
    wall(1, 2, {1}, {1, -1}, Vec3::UnitX(), 2, 1);  // x = 0, y >= 0
    wall(0, 2, {1}, {1, -1}, Vec3::UnitY(), 2, 1);  // y = 0, x >= 0
    domains = 3;
  }
  lb.mesh.domain_count = domains;
  validate(lb.mesh);
  return lb.mesh;
}

}  // namespace pmchwt::geometry
