#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "pmchwt/geometry.hpp"
#include "pmchwt/types.hpp"

namespace pmchwt::spaces {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Triangle data in the id-sorted vertex frame. Local shape k is
/// (x - p[k]) / (2 area): unit flux out through the edge opposite p[k],
/// divergence 1 / area.
struct TriangleGeom {
  std::array<Vec3, 3> p;
  std::array<PointId, 3> id;
  std::array<int, 3> vertex;  // surface-local vertex index of slot k
  Vec3 normal;                // oriented unit normal
  Vec3 centroid;
  double area = 0.0;
  double radius = 0.0;  // max distance centroid -> vertex

  int slot_of(int local_vertex) const;
  Vec3 point(const std::array<double, 3>& bary) const { return bary[0] * p[0] + bary[1] * p[1] + bary[2] * p[2]; }
};

struct SurfaceGeometry {
  std::vector<TriangleGeom> tris;
  std::size_t size() const { return tris.size(); }
};

SurfaceGeometry make_geometry(const geometry::OrientedSurfaceMesh& s);

enum class Flavour { rwg, bc };

struct ShapeTerm {
  int dof;
  int k;  // canonical slot
  double coef;
};

/// Div-conforming functions on one oriented surface, one per interior edge,
/// each stored as shape-function terms on the support triangles.
struct TraceSpace {
  Flavour flavour = Flavour::rwg;
  std::shared_ptr<const geometry::OrientedSurfaceMesh> surface;
  geometry::EdgeSet edges;
  std::shared_ptr<const SurfaceGeometry> support;
  std::shared_ptr<const geometry::RefinedSurface> refinement;  // bc only
  std::vector<int> parent;                                      // support triangle -> surface triangle
  std::vector<std::vector<ShapeTerm>> terms;                    // per support triangle
  std::vector<int> dof_edge;                                    // edge index per dof

  int size() const { return static_cast<int>(dof_edge.size()); }
  /// Per support triangle shape coefficients of a coefficient vector.
  std::vector<std::array<cplx, 3>> expand(const VectorXc& coeffs) const;
  std::vector<std::array<double, 3>> expand(const Eigen::VectorXd& coeffs) const;
};

TraceSpace rwg_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> surface, const geometry::EdgeSet& edges);
TraceSpace rwg_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> surface);

/// Buffa-Christiansen functions on the barycentric refinement. At vertices on
/// the boundary of an open surface the vertex fan is a path and the charge is
/// spread so that no flux leaves through the boundary.
TraceSpace bc_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> surface, const geometry::EdgeSet& edges,
                    std::shared_ptr<const geometry::RefinedSurface> refinement);
TraceSpace bc_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> surface);

/// Per-domain scalar spaces shared by both trace components. Layout:
/// domain-major, within a domain the m block then the j block.
struct MultiTraceSpace {
  std::vector<TraceSpace> domains;
  std::vector<int> offset;  // scalar offset per domain

  int scalar_size() const { return offset.empty() ? 0 : offset.back(); }
  int size() const { return 2 * scalar_size(); }
  int dim(int d) const { return domains[d].size(); }
  int index(int d, int component, int dof) const { return 2 * offset[d] + component * dim(d) + dof; }
  int block(int d) const { return 2 * offset[d]; }
};

MultiTraceSpace make_multi(std::vector<TraceSpace> per_domain);

/// Single-trace embedding, acting identically on both components.
struct EmbeddingMatrix {
  SparseMatrix scalar;    // rows: full scalar dofs, cols: reduced scalar dofs
  SparseMatrix expanded;  // component-expanded layout of the multi-trace spaces

  int rows() const { return static_cast<int>(expanded.rows()); }
  int cols() const { return static_cast<int>(expanded.cols()); }
  VectorXc apply(const VectorXc& x) const;
  VectorXc apply_transpose(const VectorXc& y) const;
};

/// Real sparse matrix times complex vector.
VectorXc multiply(const SparseMatrix& a, const VectorXc& x);
VectorXc multiply_transpose(const SparseMatrix& a, const VectorXc& x);

EmbeddingMatrix build_R(const MultiTraceSpace& full, const MultiTraceSpace& reduced);

/// Per-domain scalar pairing matrices  G[a][b] = int (n x test_a) . trial_b.
std::vector<SparseMatrix> gram_cross(const MultiTraceSpace& test, const MultiTraceSpace& trial);
SparseMatrix gram_cross(const TraceSpace& test, const TraceSpace& trial);

/// Component-expanded multi-trace pairing: identity flavour pairs m with m and
/// j with j, swapped flavour pairs m-test with j-trial and j-test with m-trial.
SparseMatrix expand_gram(const MultiTraceSpace& space, const std::vector<SparseMatrix>& scalar, bool swapped);

/// RWG interpolation of a tangential field given through u(x) . (n x t) on edges.
/// The callback receives the point and the unit tangent t of the oriented edge.
template <class F>
VectorXc interpolate_flux(const TraceSpace& rwg, F&& crossing);

}  // namespace pmchwt::spaces

#include "pmchwt/detail/interpolate.hpp"
