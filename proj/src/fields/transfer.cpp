#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "pmchwt/fields.hpp"
#include "pmchwt/quadrature.hpp"

namespace pmchwt::fields {

namespace {

/// Bucket grid over triangle bounding boxes.
class TriangleLocator {
 public:
  explicit TriangleLocator(const spaces::SurfaceGeometry& geo) : geo_(geo) {
    for (const auto& g : geo.tris) cell_ = std::max(cell_, 2.0 * g.radius);
    for (std::size_t t = 0; t < geo.tris.size(); ++t) {
      const auto& g = geo.tris[t];
      Vec3 lo = g.p[0].cwiseMin(g.p[1]).cwiseMin(g.p[2]), hi = g.p[0].cwiseMax(g.p[1]).cwiseMax(g.p[2]);
      const auto a = cell_of(lo), b = cell_of(hi);
      for (long i = a[0] - 1; i <= b[0] + 1; ++i)
        for (long j = a[1] - 1; j <= b[1] + 1; ++j)
          for (long k = a[2] - 1; k <= b[2] + 1; ++k) cells_[key({i, j, k})].push_back(static_cast<int>(t));
    }
  }

  /// Lowest-index triangle with the given normal that contains x, or -1.
  int find(const Vec3& x, const Vec3& normal) const {
    auto it = cells_.find(key(cell_of(x)));
    if (it == cells_.end()) return -1;
    for (int t : it->second) {
      const auto& g = geo_.tris[t];
      if (g.normal.dot(normal) < 1.0 - 1e-9) continue;
      const double tol = 1e-9 * g.radius;
      if (std::abs((x - g.p[0]).dot(g.normal)) > tol) continue;
      const Vec3 e1 = g.p[1] - g.p[0], e2 = g.p[2] - g.p[0], r = x - g.p[0];
      const double a11 = e1.dot(e1), a12 = e1.dot(e2), a22 = e2.dot(e2);
      const double det = a11 * a22 - a12 * a12;
      const double l1 = (a22 * r.dot(e1) - a12 * r.dot(e2)) / det;
      const double l2 = (a11 * r.dot(e2) - a12 * r.dot(e1)) / det;
      if (l1 >= -1e-9 && l2 >= -1e-9 && l1 + l2 <= 1.0 + 1e-9) return t;
    }
    return -1;
  }

 private:
  std::array<long, 3> cell_of(const Vec3& x) const {
    return {static_cast<long>(std::floor(x[0] / cell_)), static_cast<long>(std::floor(x[1] / cell_)),
            static_cast<long>(std::floor(x[2] / cell_))};
  }
  static long key(const std::array<long, 3>& c) {
    return ((c[0] + (1L << 20)) << 42) ^ ((c[1] + (1L << 20)) << 21) ^ (c[2] + (1L << 20));
  }

  const spaces::SurfaceGeometry& geo_;
  double cell_ = 0.0;
  std::unordered_map<long, std::vector<int>> cells_;
};

}  // namespace

VectorXc transfer(const spaces::TraceSpace& coarse, const VectorXc& coeffs, const spaces::TraceSpace& fine) {
  if (coarse.flavour != spaces::Flavour::rwg || fine.flavour != spaces::Flavour::rwg)
    throw std::invalid_argument("transfer: needs RWG spaces");
  if (coeffs.size() != coarse.size()) throw std::invalid_argument("transfer: coefficient size mismatch");
  VectorXc out = VectorXc::Zero(fine.size());
  if (fine.size() == 0) return out;
  const auto ex = coarse.expand(coeffs);
  const TriangleLocator loc(*coarse.support);
  const auto gl = quadrature::gauss_legendre(10);
  for (int d = 0; d < fine.size(); ++d) {
    const auto& e = fine.edges.edges[fine.dof_edge[d]];
    const Vec3& a = fine.surface->vertices[e.v[0]];
    const Vec3& b = fine.surface->vertices[e.v[1]];
    const Vec3 n = fine.surface->normal(e.tri[0]);
    const double len = (b - a).norm();
    const Vec3 t = (b - a) / len;
    cplx s = 0.0;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      const Vec3 x = a + gl.x[q] * (b - a);
      const int c = loc.find(x, n);
      if (c < 0) {
        std::ostringstream msg;
        msg << "transfer: no coarse triangle contains the point (" << x.transpose() << ")";
        throw std::runtime_error(msg.str());
      }
      s += gl.w[q] * dot(cross(evaluate(coarse, ex, c, x), n), t);
    }
    out[d] = s * len;
  }
  return out;
}

VectorXc transfer(const spaces::MultiTraceSpace& coarse, const VectorXc& u, const spaces::MultiTraceSpace& fine) {
  if (coarse.domains.size() != fine.domains.size()) throw std::invalid_argument("transfer: domain count mismatch");
  if (u.size() != coarse.size()) throw std::invalid_argument("transfer: vector size mismatch");
  VectorXc out = VectorXc::Zero(fine.size());
  for (int d = 0; d < static_cast<int>(fine.domains.size()); ++d) {
    if (fine.dim(d) == 0) continue;
    for (int c = 0; c < 2; ++c)
      out.segment(fine.index(d, c, 0), fine.dim(d)) =
          transfer(coarse.domains[d], VectorXc(u.segment(coarse.index(d, c, 0), coarse.dim(d))), fine.domains[d]);
  }
  return out;
}

}  // namespace pmchwt::fields
