#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pmchwt/types.hpp"

namespace pmchwt::geometry {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shared triangulation of all interfaces. The right-hand normal of triangle t
/// points into domain adjacency[t][0] and out of adjacency[t][1].
struct SkeletonMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> adjacency;
  int domain_count = 0;
};

/// Throws GeometryError naming the first offending entity.
void validate(const SkeletonMesh& mesh);

SkeletonMesh parse_mesh(std::istream& in);
SkeletonMesh load_mesh(const std::string& path);
void write_mesh(const SkeletonMesh& mesh, std::ostream& out);
void write_mesh(const SkeletonMesh& mesh, const std::string& path);

struct SkeletonEdge {
  int a = 0, b = 0;  // a < b
  std::vector<int> triangles;
};

/// Edges of the skeleton sorted by (a, b).
std::vector<SkeletonEdge> skeleton_edges(const SkeletonMesh& mesh);

/// Number of distinct domains touching an edge; 3 or more marks a junction.
int domains_at_edge(const SkeletonMesh& mesh, const SkeletonEdge& edge);

/// Triangles ordered so the right-hand normal is the surface normal.
struct OrientedSurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<PointId> ids;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> source;  // skeleton triangle (or -1 for standalone meshes)
  int domain = -1;

  std::size_t size() const { return triangles.size(); }
  Vec3 normal(int t) const;  // unit
  double area(int t) const;
  double total_area() const;
};

/// Volume enclosed, positive when normals point outward.
double signed_volume(const OrientedSurfaceMesh& s);

/// Standalone surface whose ids are the local vertex indices.
OrientedSurfaceMesh make_surface(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);

OrientedSurfaceMesh build_domain_boundary(const SkeletonMesh& mesh, int domain);

struct Edge {
  std::array<int, 2> v{};          // local vertex indices, ids[v[0]] < ids[v[1]]
  std::array<int, 2> tri{-1, -1};  // tri[0] = plus triangle, tri[1] = minus triangle or -1
  std::array<int, 2> opposite{-1, -1};  // oriented local corner opposite the edge
  bool interior() const { return tri[1] >= 0; }
};

struct EdgeSet {
  std::vector<Edge> edges;
  std::vector<int> interior;                        // edge indices of interior edges
  std::vector<std::array<int, 3>> triangle_edges;   // edge opposite oriented corner k
  bool closed() const { return interior.size() == edges.size(); }
};

/// Oriented low-to-high id. The minus triangle is the one in which the edge
/// appears in counter-clockwise order.
EdgeSet edge_enumeration(const OrientedSurfaceMesh& s);

/// Orientation rule applied to a vertex pair: returns (lo, hi, sign) with sign -1 when swapped.
std::tuple<PointId, PointId, int> orient(PointId a, PointId b);

PointId midpoint_id(PointId a, PointId b);
PointId barycenter_id(PointId a, PointId b, PointId c);

struct RefinedSurface {
  OrientedSurfaceMesh mesh;
  std::vector<int> parent;  // coarse triangle per child
  std::vector<int> corner;  // oriented coarse corner the child touches
};

/// Six children per triangle through barycenter and edge midpoints.
RefinedSurface barycentric_refine(const OrientedSurfaceMesh& s);

struct ReducedGeometry {
  std::vector<int> triangle_owner;  // per skeleton triangle
  std::vector<int> edge_owner;      // per skeleton edge (order of skeleton_edges)
  std::vector<OrientedSurfaceMesh> surfaces;  // per domain, oriented as the domain boundary
};

/// Interface (i, j) with i < j mapped to its owning domain.
using OwnerOverrides = std::map<std::pair<int, int>, int>;

ReducedGeometry reduce_geometry(const SkeletonMesh& mesh, const OwnerOverrides& overrides = {});

/// Segment subdivision count: length/h rounded half up, at least 1.
int divisions(double length, double h);

SkeletonMesh make_two_cubes(double h);

enum class SphereSplit { none, half, quadrant };
SkeletonMesh make_split_sphere(double h, SphereSplit split);

/// Closed single tetrahedron tagged (0|1).
SkeletonMesh make_tetrahedron();

}  // namespace pmchwt::geometry
