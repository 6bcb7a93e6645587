#include <map>
#include <sstream>

#include "pmchwt/spaces.hpp"

namespace pmchwt::spaces {

VectorXc multiply(const SparseMatrix& a, const VectorXc& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("multiply: size mismatch");
  VectorXc y = VectorXc::Zero(a.rows());
  for (int col = 0; col < a.outerSize(); ++col) {
    const cplx v = x[col];
    if (v == cplx(0.0)) continue;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) y[it.row()] += it.value() * v;
  }
  return y;
}

VectorXc multiply_transpose(const SparseMatrix& a, const VectorXc& x) {
  if (a.rows() != x.size()) throw std::invalid_argument("multiply_transpose: size mismatch");
  VectorXc y(a.cols());
  for (int col = 0; col < a.outerSize(); ++col) {
    cplx s = 0.0;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) s += it.value() * x[it.row()];
    y[col] = s;
  }
  return y;
}

EmbeddingMatrix build_R(const MultiTraceSpace& full, const MultiTraceSpace& reduced) {
  // oriented edge (lo, hi) -> (domain, dof) over all domain boundaries
  std::map<std::pair<PointId, PointId>, std::vector<std::pair<int, int>>> lookup;
  for (std::size_t d = 0; d < full.domains.size(); ++d) {
    const auto& sp = full.domains[d];
    for (int k = 0; k < sp.size(); ++k) {
      const auto& e = sp.edges.edges[sp.dof_edge[k]];
      lookup[{sp.surface->ids[e.v[0]], sp.surface->ids[e.v[1]]}].push_back({static_cast<int>(d), k});
    }
  }
  std::vector<Eigen::Triplet<double>> scalar, expanded;
  for (std::size_t i = 0; i < reduced.domains.size(); ++i) {
    const auto& sp = reduced.domains[i];
    for (int k = 0; k < sp.size(); ++k) {
      const auto& e = sp.edges.edges[sp.dof_edge[k]];
      const PointId a = sp.surface->ids[e.v[0]], b = sp.surface->ids[e.v[1]];
      auto it = lookup.find({a, b});
      if (it == lookup.end() || it->second.size() < 2) {
        std::ostringstream msg;
        msg << "build_R: reduced edge (" << a << ", " << b << ") of domain " << i
            << " is interior to fewer than two domain boundaries";
        throw std::runtime_error(msg.str());
      }
      for (const auto& [d, dof] : it->second) {
        const auto& fsp = full.domains[d];
        const auto& fe = fsp.edges.edges[fsp.dof_edge[dof]];
        // +1 when the defining edges have equal orientation
        const double sign = fsp.surface->ids[fe.v[0]] == a ? 1.0 : -1.0;
        scalar.emplace_back(full.offset[d] + dof, reduced.offset[i] + k, sign);
        for (int c = 0; c < 2; ++c)
          expanded.emplace_back(full.index(d, c, dof), reduced.index(static_cast<int>(i), c, k), sign);
      }
    }
  }
  EmbeddingMatrix r;
  r.scalar.resize(full.scalar_size(), reduced.scalar_size());
  r.scalar.setFromTriplets(scalar.begin(), scalar.end());
  r.expanded.resize(full.size(), reduced.size());
  r.expanded.setFromTriplets(expanded.begin(), expanded.end());
  return r;
}

VectorXc EmbeddingMatrix::apply(const VectorXc& x) const { return multiply(expanded, x); }

VectorXc EmbeddingMatrix::apply_transpose(const VectorXc& y) const { return multiply_transpose(expanded, y); }

}  // namespace pmchwt::spaces
