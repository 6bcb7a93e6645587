#include "pmchwt/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace pmchwt::quadrature {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[n - 1 - i] = 0.5 * (1.0 + x);
    r.w[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

namespace {

void add_orbit3(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.bary.push_back({b, a, a});
  r.bary.push_back({a, b, a});
  r.bary.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) r.w.push_back(w);
}

TriangleRule collapsed_gauss(int n) {
  const Rule1D g = gauss_legendre(n);
  TriangleRule r;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = g.x[i], v = g.x[j];
      const double l1 = u, l2 = (1.0 - u) * v;
      r.bary.push_back({1.0 - l1 - l2, l1, l2});
      r.w.push_back(2.0 * g.w[i] * g.w[j] * (1.0 - u));
    }
  }
  return r;
}

TriangleRule build_triangle_rule(int degree) {
  TriangleRule r;
  if (degree <= 1) {
    r.bary.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    r.w.push_back(1.0);
  } else if (degree == 2) {
    add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
  } else if (degree <= 4) {
    add_orbit3(r, 0.445948490915965, 0.223381589678011);
    add_orbit3(r, 0.091576213509771, 0.109951743655322);
  } else if (degree == 5) {
    r.bary.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    r.w.push_back(0.225);
    add_orbit3(r, 0.470142064105115, 0.132394152788506);
    add_orbit3(r, 0.101286507323456, 0.125939180544827);
  } else {
    r = collapsed_gauss((degree + 3) / 2);
  }
  return r;
}

// Reference triangle 0 <= x2 <= x1 <= 1 mapped to barycentric (1 - x1, x1 - x2, x2).
std::array<double, 3> ref_to_bary(double x1, double x2) { return {1.0 - x1, x1 - x2, x2}; }

PairRule build_pair_rule(PairKind kind, int order) {
  const Rule1D g = gauss_legendre(order);
  PairRule r;
  auto push = [&](double s1, double s2, double t1, double t2, double w) {
    r.s.push_back(ref_to_bary(s1, s2));
    r.t.push_back(ref_to_bary(t1, t2));
    r.w.push_back(4.0 * w);
  };
  for (int a = 0; a < order; ++a) {
    const double xi = g.x[a];
    for (int b = 0; b < order; ++b) {
      const double e1 = g.x[b];
      for (int c = 0; c < order; ++c) {
        const double e2 = g.x[c];
        for (int d = 0; d < order; ++d) {
          const double e3 = g.x[d];
          const double w = g.w[a] * g.w[b] * g.w[c] * g.w[d];
          switch (kind) {
            case PairKind::regular: {
              const double jw = w * xi * e2;
              push(xi, xi * e1, e2, e2 * e3, jw);
              break;
            }
            case PairKind::vertex: {
              const double jw = w * xi * xi * xi * e2;
              push(xi, xi * e1, xi * e2, xi * e2 * e3, jw);
              push(xi * e2, xi * e2 * e3, xi, xi * e1, jw);
              break;
            }
            case PairKind::edge: {
              const double jw = w * xi * xi * xi * e1 * e1 * e2;
              push(xi, xi * e1 * e3, xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), w * xi * xi * xi * e1 * e1);
              push(xi, xi * e1, xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3), jw);
              push(xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), xi, xi * e1 * e2 * e3, jw);
              push(xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3), xi, xi * e1, jw);
              push(xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3), xi, xi * e1 * e2, jw);
              break;
            }
            case PairKind::coincident: {
              const double jw = w * xi * xi * xi * e1 * e1 * e2;
              push(xi, xi * (1.0 - e1 + e1 * e2), xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1), jw);
              push(xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1), xi, xi * (1.0 - e1 + e1 * e2), jw);
              push(xi, xi * e1 * (1.0 - e2 + e2 * e3), xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), jw);
              push(xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), xi, xi * e1 * (1.0 - e2 + e2 * e3), jw);
              push(xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3), xi, xi * e1 * (1.0 - e2), jw);
              push(xi, xi * e1 * (1.0 - e2), xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3), jw);
              break;
            }
          }
        }
      }
    }
  }
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<TriangleRule>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[degree];
  if (!slot) slot = std::make_unique<TriangleRule>(build_triangle_rule(degree));
  return *slot;
}

const PairRule& sauter_schwab(PairKind kind, int order) {
  static std::mutex m;
  static std::map<std::pair<int, int>, std::unique_ptr<PairRule>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[{static_cast<int>(kind), order}];
  if (!slot) slot = std::make_unique<PairRule>(build_pair_rule(kind, order));
  return *slot;
}

}  // namespace pmchwt::quadrature
