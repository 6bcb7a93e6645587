#include <stdexcept>

#include "pmchwt/quadrature.hpp"
#include "pmchwt/spaces.hpp"

namespace pmchwt::spaces {

namespace {

Vec3 shape(const TriangleGeom& g, int k, const Vec3& x) { return (x - g.p[k]) / (2.0 * g.area); }

}  // namespace

SparseMatrix gram_cross(const TraceSpace& test, const TraceSpace& trial) {
  if (test.size() != trial.size() || test.surface->ids != trial.surface->ids)
    throw std::invalid_argument("gram_cross: spaces live on different surfaces");
  // integrate over the finer support; the coarse triangle is the parent
  const bool test_fine = test.flavour == Flavour::bc || trial.flavour == Flavour::rwg;
  const TraceSpace& fine = test_fine ? test : trial;
  const auto& rule = quadrature::triangle_rule(2);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t t = 0; t < fine.support->size(); ++t) {
    const int tt = test.flavour == fine.flavour ? static_cast<int>(t) : fine.parent[t];
    const int tr = trial.flavour == fine.flavour ? static_cast<int>(t) : fine.parent[t];
    const auto& a_terms = test.terms[tt];
    const auto& b_terms = trial.terms[tr];
    if (a_terms.empty() || b_terms.empty()) continue;
    const TriangleGeom& gf = fine.support->tris[t];
    const TriangleGeom& ga = test.support->tris[tt];
    const TriangleGeom& gb = trial.support->tris[tr];
    double local[3][3] = {};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 x = gf.point(rule.bary[q]);
      for (int k = 0; k < 3; ++k) {
        const Vec3 nf = gf.normal.cross(shape(ga, k, x));
        for (int l = 0; l < 3; ++l) local[k][l] += rule.w[q] * nf.dot(shape(gb, l, x));
      }
    }
    for (const auto& a : a_terms)
      for (const auto& b : b_terms) trip.emplace_back(a.dof, b.dof, gf.area * a.coef * b.coef * local[a.k][b.k]);
  }
  SparseMatrix g(test.size(), trial.size());
  g.setFromTriplets(trip.begin(), trip.end());
  g.prune(0.0);
  return g;
}

std::vector<SparseMatrix> gram_cross(const MultiTraceSpace& test, const MultiTraceSpace& trial) {
  if (test.domains.size() != trial.domains.size()) throw std::invalid_argument("gram_cross: domain count mismatch");
  std::vector<SparseMatrix> out;
  for (std::size_t d = 0; d < test.domains.size(); ++d) out.push_back(gram_cross(test.domains[d], trial.domains[d]));
  return out;
}

SparseMatrix expand_gram(const MultiTraceSpace& space, const std::vector<SparseMatrix>& scalar, bool swapped) {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t d = 0; d < scalar.size(); ++d) {
    const int n = space.dim(static_cast<int>(d));
    for (int col = 0; col < scalar[d].outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(scalar[d], col); it; ++it)
        for (int c = 0; c < 2; ++c) {
          const int rc = c, cc = swapped ? 1 - c : c;
          trip.emplace_back(space.block(static_cast<int>(d)) + rc * n + it.row(),
                            space.block(static_cast<int>(d)) + cc * n + it.col(), it.value());
        }
  }
  SparseMatrix g(space.size(), space.size());
  g.setFromTriplets(trip.begin(), trip.end());
  return g;
}

}  // namespace pmchwt::spaces
