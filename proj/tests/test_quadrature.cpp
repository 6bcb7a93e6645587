#include <doctest.h>

#include <cmath>

#include "pmchwt/quadrature.hpp"
#include "pmchwt/types.hpp"

using namespace pmchwt;
using namespace pmchwt::quadrature;

namespace {

/// Exact integral of x^a y^b over the reference triangle (0,0), (1,0), (0,1), divided by its area.
double monomial_mean(int a, int b) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return 2.0 * fact(a) * fact(b) / fact(a + b + 2);
}

/// Double integral of 1/|x - y| over pairs of triangles with a pair rule.
double inverse_distance(const PairRule& rule, const std::array<Vec3, 3>& s, const std::array<Vec3, 3>& t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Vec3 x = rule.s[i][0] * s[0] + rule.s[i][1] * s[1] + rule.s[i][2] * s[2];
    const Vec3 y = rule.t[i][0] * t[0] + rule.t[i][1] * t[1] + rule.t[i][2] * t[2];
    sum += rule.w[i] / (x - y).norm();
  }
  return sum;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n = 1; n <= 10; ++n) {
    const auto r = gauss_legendre(n);
    for (int p = 0; p < 2 * n; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle rules are exact to their degree") {
  for (int deg = 1; deg <= 14; ++deg) {
    const auto& r = triangle_rule(deg);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.bary[i][1], a) * std::pow(r.bary[i][2], b);
        CHECK(s == doctest::Approx(monomial_mean(a, b)).epsilon(1e-12));
      }
  }
}

TEST_CASE("singular pair rules integrate constants and converge on 1/r") {
  const std::array<Vec3, 3> s{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const std::array<Vec3, 3> t_edge{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.3, -0.8, 0.2)};
  const std::array<Vec3, 3> t_vertex{Vec3(0, 0, 0), Vec3(-0.9, 0.1, 0.3), Vec3(-0.2, -1.0, 0.0)};
  struct Case {
    PairKind kind;
    std::array<Vec3, 3> t;
  };
  for (const auto& c : {Case{PairKind::coincident, s}, Case{PairKind::edge, t_edge}, Case{PairKind::vertex, t_vertex}}) {
    double w = 0.0;
    for (double x : sauter_schwab(c.kind, 4).w) w += x;
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    const double lo = inverse_distance(sauter_schwab(c.kind, 8), s, c.t);
    const double hi = inverse_distance(sauter_schwab(c.kind, 12), s, c.t);
    CHECK(std::abs(lo - hi) < 1e-6 * std::abs(hi));
  }
}
