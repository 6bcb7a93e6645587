#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "pmchwt/geometry.hpp"

using namespace pmchwt;
using namespace pmchwt::geometry;

namespace {

const char* kTetra =
    "composite-mesh v1 4 4 2\n"
    "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
    "0 2 1 0 1\n0 1 3 0 1\n0 3 2 0 1\n1 2 3 0 1\n";

/// Two tetrahedra glued on the face (1, 2, 3).
SkeletonMesh two_tetra() {
  SkeletonMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1)};
  m.triangles = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}, {1, 2, 4}, {2, 3, 4}, {3, 1, 4}};
  m.adjacency = {{0, 1}, {0, 1}, {0, 1}, {2, 1}, {0, 2}, {0, 2}, {0, 2}};
  m.domain_count = 3;
  return m;
}

int junction_edges(const SkeletonMesh& m) {
  int n = 0;
  for (const auto& e : skeleton_edges(m)) n += domains_at_edge(m, e) >= 3;
  return n;
}

}  // namespace

TEST_CASE("tetrahedron file parses into two domains and six edges") {
  std::istringstream in(kTetra);
  const auto m = parse_mesh(in);
  CHECK(m.domain_count == 2);
  CHECK(m.triangles.size() == 4);
  CHECK(skeleton_edges(m).size() == 6);
}

TEST_CASE("out-of-range vertex index is reported with the triangle") {
  std::istringstream in(
      "composite-mesh v1 4 4 2\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0 2 99 0 1\n0 1 3 0 1\n0 3 2 0 1\n1 2 3 0 1\n");
  try {
    parse_mesh(in);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("99") != std::string::npos);
  }
}

TEST_CASE("malformed header is a parse error") {
  std::istringstream in("mesh 4 4\n");
  CHECK_THROWS(parse_mesh(in));
}

TEST_CASE("two glued tetrahedra have three junction edges") {
  const auto m = two_tetra();
  validate(m);
  CHECK(m.domain_count == 3);
  CHECK(m.triangles.size() == 7);
  CHECK(junction_edges(m) == 3);
}

TEST_CASE("open domain boundary is rejected") {
  auto m = two_tetra();
  m.triangles.pop_back();
  m.adjacency.pop_back();
  CHECK_THROWS_AS(validate(m), GeometryError);
}

TEST_CASE("two cubes at h = 0.5 share one face whose edges touch three domains") {
  const auto m = make_two_cubes(0.5);
  int shared = 0;
  for (const auto& a : m.adjacency) shared += (std::min(a[0], a[1]) == 1 && std::max(a[0], a[1]) == 2);
  CHECK(shared == 2);  // one 0.5 x 0.5 square, two triangles
  CHECK(junction_edges(m) == 4);
}

TEST_CASE("two cubes triangle count scales with h^-2") {
  const double n5 = make_two_cubes(0.5).triangles.size(), n25 = make_two_cubes(0.25).triangles.size();
  CHECK(n25 / n5 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("generators reject h outside (0, 0.5]") {
  CHECK_THROWS(make_two_cubes(0.0));
  CHECK_THROWS(make_two_cubes(-0.1));
  CHECK_THROWS(make_split_sphere(0.6, SphereSplit::half));
}

TEST_CASE("split spheres") {
  SUBCASE("half split has an equatorial disk and junction edges") {
    const auto m = make_split_sphere(0.4, SphereSplit::half);
    CHECK(m.domain_count == 3);
    int disk = 0;
    for (const auto& a : m.adjacency) disk += (std::min(a[0], a[1]) == 1 && std::max(a[0], a[1]) == 2);
    CHECK(disk > 0);
    CHECK(junction_edges(m) > 0);
  }
  SUBCASE("quadrant split has three domains") {
    const auto m = make_split_sphere(0.4, SphereSplit::quadrant);
    CHECK(m.domain_count == 3);
    validate(m);
  }
  SUBCASE("outer area approximates 4 pi") {
    const auto m = make_split_sphere(0.4, SphereSplit::none);
    const auto s = build_domain_boundary(m, 1);
    CHECK(s.total_area() == doctest::Approx(4.0 * kPi).epsilon(0.05));
  }
}

TEST_CASE("domain boundaries point out of their domain") {
  const auto m = make_tetrahedron();
  const auto s1 = build_domain_boundary(m, 1), s0 = build_domain_boundary(m, 0);
  CHECK(s1.size() == 4);
  CHECK(signed_volume(s1) > 0.0);
  CHECK(signed_volume(s0) < 0.0);
  CHECK(signed_volume(s0) == doctest::Approx(-signed_volume(s1)));
  CHECK_THROWS(build_domain_boundary(m, 2));

  const auto cubes = make_two_cubes(0.25);
  for (int d = 1; d < 3; ++d) {
    const auto s = build_domain_boundary(cubes, d);
    CHECK(edge_enumeration(s).closed());
    CHECK(signed_volume(s) == doctest::Approx(d == 1 ? 1.0 : 0.125));
  }
}

TEST_CASE("interface triangles appear with opposite orientation in the two domains") {
  const auto m = make_two_cubes(0.5);
  const auto s1 = build_domain_boundary(m, 1), s2 = build_domain_boundary(m, 2);
  int checked = 0;
  for (std::size_t a = 0; a < s1.size(); ++a)
    for (std::size_t b = 0; b < s2.size(); ++b)
      if (s1.source[a] == s2.source[b]) {
        CHECK(s1.normal(static_cast<int>(a)).dot(s2.normal(static_cast<int>(b))) == doctest::Approx(-1.0));
        ++checked;
      }
  CHECK(checked == 2);
}

TEST_CASE("barycentric refinement") {
  const auto s = build_domain_boundary(make_split_sphere(0.5, SphereSplit::none), 1);
  const auto r = barycentric_refine(s);
  const auto e = edge_enumeration(s);
  CHECK(r.mesh.size() == 6 * s.size());
  CHECK(r.mesh.vertices.size() == s.vertices.size() + e.edges.size() + s.size());
  std::vector<double> child_area(s.size(), 0.0);
  for (std::size_t c = 0; c < r.mesh.size(); ++c) child_area[r.parent[c]] += r.mesh.area(static_cast<int>(c));
  for (std::size_t t = 0; t < s.size(); ++t) CHECK(std::abs(child_area[t] - s.area(static_cast<int>(t))) < 1e-12 * s.area(static_cast<int>(t)));
  for (std::size_t c = 0; c < r.mesh.size(); ++c)
    CHECK(r.mesh.normal(static_cast<int>(c)).dot(s.normal(r.parent[c])) > 0.999);
}

TEST_CASE("single-sided reduction") {
  SUBCASE("two cubes") {
    const auto m = make_two_cubes(0.25);
    const auto r = reduce_geometry(m);
    CHECK(r.surfaces[0].size() == build_domain_boundary(m, 0).size());
    CHECK(r.surfaces[2].size() == 0);
    for (std::size_t t = 0; t < r.surfaces[1].size(); ++t) {
      const int src = r.surfaces[1].source[t];
      CHECK(std::min(m.adjacency[src][0], m.adjacency[src][1]) == 1);
      CHECK(std::max(m.adjacency[src][0], m.adjacency[src][1]) == 2);
    }
  }
  SUBCASE("split sphere keeps the exterior and the disk") {
    const auto m = make_split_sphere(0.4, SphereSplit::half);
    const auto r = reduce_geometry(m);
    CHECK(r.surfaces[0].size() == build_domain_boundary(m, 0).size());
    CHECK(r.surfaces[1].size() > 0);
    CHECK(r.surfaces[2].size() == 0);
  }
  SUBCASE("single sphere") {
    const auto m = make_split_sphere(0.5, SphereSplit::none);
    const auto r = reduce_geometry(m);
    CHECK(r.surfaces[1].size() == 0);
  }
  SUBCASE("every skeleton edge is interior to exactly one reduced surface") {
    const auto m = make_two_cubes(0.25);
    const auto r = reduce_geometry(m);
    std::size_t interior = 0;
    for (const auto& s : r.surfaces)
      if (s.size() > 0) interior += edge_enumeration(s).interior.size();
    CHECK(interior == skeleton_edges(m).size());
  }
}

TEST_CASE("edge enumeration") {
  SUBCASE("closed tetrahedron") {
    const auto e = edge_enumeration(build_domain_boundary(make_tetrahedron(), 1));
    CHECK(e.edges.size() == 6);
    CHECK(e.closed());
  }
  SUBCASE("two coplanar triangles") {
    const auto s = make_surface({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)}, {{0, 1, 2}, {0, 2, 3}});
    const auto e = edge_enumeration(s);
    CHECK(e.edges.size() == 5);
    CHECK(e.interior.size() == 1);
  }
  SUBCASE("orientation rule") {
    const auto [lo, hi, sign] = orient(7, 3);
    CHECK(lo == 3);
    CHECK(hi == 7);
    CHECK(sign == -1);
  }
  SUBCASE("edges stored low to high") {
    const auto s = build_domain_boundary(make_two_cubes(0.5), 0);
    for (const auto& e : edge_enumeration(s).edges) CHECK(s.ids[e.v[0]] < s.ids[e.v[1]]);
  }
}

TEST_CASE("generated meshes survive a write/load round trip unchanged") {
  for (const auto& m : {make_two_cubes(0.5), make_split_sphere(0.5, SphereSplit::quadrant)}) {
    std::stringstream a;
    write_mesh(m, a);
    const auto back = parse_mesh(a);
    std::stringstream b;
    write_mesh(back, b);
    CHECK(a.str() == b.str());
    CHECK(back.vertices == m.vertices);
    CHECK(back.triangles == m.triangles);
    CHECK(back.adjacency == m.adjacency);
  }
}
