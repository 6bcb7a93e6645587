#pragma once

#include <array>
#include <vector>

namespace pmchwt::quadrature {

/// Gauss-Legendre points and weights on [0, 1].
struct Rule1D {
  std::vector<double> x, w;
};
Rule1D gauss_legendre(int n);

/// Barycentric points on a triangle; weights sum to 1 so the integral is area * sum.
struct TriangleRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};

/// Exact for polynomials of the given total degree.
const TriangleRule& triangle_rule(int degree);

enum class PairKind { regular = 0, vertex = 1, edge = 2, coincident = 3 };

/// Point pairs in barycentric coordinates of two triangles whose shared
/// vertices occupy the leading corners in the same order. Weights are
/// normalised so that the double integral is area_s * area_t * sum.
struct PairRule {
  std::vector<std::array<double, 3>> s, t;
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};

/// Relative-coordinate rules for touching triangles with `order` Gauss points per parameter.
const PairRule& sauter_schwab(PairKind kind, int order);

}  // namespace pmchwt::quadrature
