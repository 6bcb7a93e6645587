#include <cmath>
#include <stdexcept>

#include "pmchwt/operators.hpp"
#include "pmchwt/quadrature.hpp"

namespace pmchwt::operators {

using spaces::TriangleGeom;

namespace {

using quadrature::PairKind;

struct Touching {
  PairKind kind = PairKind::regular;
  std::array<int, 3> ps{0, 1, 2}, pt{0, 1, 2};  // shared slots first, in matching order
};

Touching classify(const TriangleGeom& s, const TriangleGeom& t) {
  Touching out;
  int n = 0;
  std::array<bool, 3> used_s{}, used_t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (s.id[i] == t.id[j]) {
        out.ps[n] = i;
        out.pt[n] = j;
        used_s[i] = used_t[j] = true;
        ++n;
      }
  int a = n, b = n;
  for (int i = 0; i < 3; ++i) {
    if (!used_s[i]) out.ps[a++] = i;
    if (!used_t[i]) out.pt[b++] = i;
  }
  out.kind = static_cast<PairKind>(n);
  return out;
}

int regular_degree(const TriangleGeom& s, const TriangleGeom& t, double scale, int boost) {
  const double d = (s.centroid - t.centroid).norm();
  const double rho = d / (s.radius + t.radius);
  const int deg_dist = rho < 1.0 ? 8 : rho < 2.0 ? 5 : rho < 4.0 ? 4 : 2;
  const double osc = scale * 2.0 * std::max(s.radius, t.radius);
  const int deg_osc = osc < 1.0 ? 1 : osc < 2.0 ? 2 : osc < 3.0 ? 4 : osc < 4.0 ? 5 : std::min(14, static_cast<int>(1.5 * osc) + 1);
  return std::max(deg_dist, deg_osc) + boost;
}

struct Moments {
  cplx m0{0.0}, mxy{0.0};
  CVec3 mx = CVec3::Zero(), my = CVec3::Zero();
  cplx s0{0.0};
  CVec3 sx = CVec3::Zero(), sy = CVec3::Zero(), syx = CVec3::Zero();
};

/// Accumulates one quadrature point pair; xs, ys relative to the triangle centroids.
inline void accumulate(Moments& m, const KernelSpec& kernel, const Vec3& x, const Vec3& y, const Vec3& xs,
                       const Vec3& ys, double w, bool dlp) {
  const Vec3 d = x - y;
  const double r = d.norm();
  if (kernel.kind == KernelKind::helmholtz) {
    const cplx e = std::exp(-kI * kernel.kappa * r) / (4.0 * kPi * r);
    const cplx wg = w * e;
    m.m0 += wg;
    m.mx += wg * xs;
    m.my += wg * ys;
    m.mxy += wg * xs.dot(ys);
    if (dlp) {
      const cplx wd = -w * (1.0 + kI * kernel.kappa * r) * e / (r * r);
      m.s0 += wd;
      m.sx += wd * xs;
      m.sy += wd * ys;
      m.syx += wd * ys.cross(xs);
    }
    return;
  }
  const cplx v = kernel.value(r);
  if (v == cplx(0.0)) return;
  const cplx wg = w * v;
  m.m0 += wg;
  m.mx += wg * xs;
  m.my += wg * ys;
  m.mxy += wg * xs.dot(ys);
}

}  // namespace

bool coplanar(const TriangleGeom& s, const TriangleGeom& t) {
  const double scale = s.radius + t.radius;
  if (s.normal.cross(t.normal).norm() > 1e-12) return false;
  for (int k = 0; k < 3; ++k)
    if (std::abs((t.p[k] - s.p[0]).dot(s.normal)) > 1e-12 * scale) return false;
  return true;
}

PairBlocks pair_blocks(const TriangleGeom& s, const TriangleGeom& t, const KernelSpec& kernel, bool want_dlp,
                       const QuadratureOptions& q) {
  if (want_dlp && kernel.kind != KernelKind::helmholtz)
    throw std::invalid_argument("pair_blocks: double layer needs the helmholtz kernel");
  const bool dlp = want_dlp && !coplanar(s, t);
  Moments m;
  const Touching touch = classify(s, t);
  if (touch.kind == PairKind::regular) {
    const auto& rs = quadrature::triangle_rule(regular_degree(s, t, kernel.scale(), q.boost));
    const auto& rt = rs;
    std::vector<Vec3> ys(rt.size());
    for (std::size_t j = 0; j < rt.size(); ++j) ys[j] = t.point(rt.bary[j]);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const Vec3 x = s.point(rs.bary[i]);
      const Vec3 xs = x - s.centroid;
      for (std::size_t j = 0; j < rt.size(); ++j)
        accumulate(m, kernel, x, ys[j], xs, ys[j] - t.centroid, rs.w[i] * rt.w[j], dlp);
    }
  } else {
    int order = q.singular_order + q.boost;
    if (kernel.scale() * 2.0 * std::max(s.radius, t.radius) > 2.0) ++order;
    const auto& rule = quadrature::sauter_schwab(touch.kind, order);
    const std::array<Vec3, 3> ps{s.p[touch.ps[0]], s.p[touch.ps[1]], s.p[touch.ps[2]]};
    const std::array<Vec3, 3> pt{t.p[touch.pt[0]], t.p[touch.pt[1]], t.p[touch.pt[2]]};
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto& a = rule.s[i];
      const auto& b = rule.t[i];
      const Vec3 x = a[0] * ps[0] + a[1] * ps[1] + a[2] * ps[2];
      const Vec3 y = b[0] * pt[0] + b[1] * pt[1] + b[2] * pt[2];
      accumulate(m, kernel, x, y, x - s.centroid, y - t.centroid, rule.w[i], dlp);
    }
  }

  PairBlocks out;
  out.scalar = m.m0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 pk = s.p[k] - s.centroid;
    for (int l = 0; l < 3; ++l) {
      const Vec3 ql = t.p[l] - t.centroid;
      // (x - p_k) . (y - q_l) with both factors relative to their own centroid
      out.vector[k][l] = 0.25 * (m.mxy - dot(pk, m.my) - dot(ql, m.mx) + pk.dot(ql) * m.m0);
      if (dlp) {
        // (x - p) . ((x - y) x (y - q)) = (p - q) . ((y - q) x (x - p))
        const CVec3 c = m.syx - cross(m.sy, pk) - cross(ql, m.sx) + ql.cross(pk).cast<cplx>() * m.s0;
        out.dlp[k][l] = 0.25 * dot(s.p[k] - t.p[l], c);
      }
    }
  }
  return out;
}

}  // namespace pmchwt::operators
