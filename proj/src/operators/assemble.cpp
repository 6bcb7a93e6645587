#include <stdexcept>

#include "pmchwt/operators.hpp"
#include "pmchwt/parallel.hpp"

namespace pmchwt::operators {

using spaces::TraceSpace;

namespace {

using Block = std::array<std::array<cplx, 3>, 3>;

/// Greedy colouring of support triangles so that no two triangles of a colour share a dof.
std::vector<std::vector<int>> colour_triangles(const TraceSpace& sp) {
  const int n = static_cast<int>(sp.terms.size());
  std::vector<std::vector<int>> by_dof(sp.size());
  for (int t = 0; t < n; ++t)
    for (const auto& term : sp.terms[t]) by_dof[term.dof].push_back(t);
  std::vector<int> colour(n, -1);
  std::vector<std::vector<int>> classes;
  std::vector<char> taken;
  for (int t = 0; t < n; ++t) {
    if (sp.terms[t].empty()) continue;
    taken.assign(classes.size() + 1, 0);
    for (const auto& term : sp.terms[t])
      for (int u : by_dof[term.dof])
        if (colour[u] >= 0) taken[colour[u]] = 1;
    int c = 0;
    while (taken[c]) ++c;
    colour[t] = c;
    if (c == static_cast<int>(classes.size())) classes.emplace_back();
    classes[c].push_back(t);
  }
  return classes;
}

/// Assembles symmetric matrices from pair blocks. fn(s, t, out) fills `nout`
/// blocks for the ordered pair s <= t; the (t, s) contribution is the transpose.
template <class Fn>
std::vector<MatrixXc> assemble_symmetric(const TraceSpace& sp, int nout, Fn&& fn) {
  const int n = sp.size();
  std::vector<MatrixXc> upper(nout, MatrixXc::Zero(n, n));
  const auto& tris = sp.support->tris;
  const int ntri = static_cast<int>(tris.size());
  const auto classes = colour_triangles(sp);
  for (const auto& cls : classes) {
    parallel::for_each(0, cls.size(), [&](std::size_t i) {
      const int s = cls[i];
      std::vector<Block> blocks(nout);
      for (int t = s; t < ntri; ++t) {
        if (sp.terms[t].empty()) continue;
        fn(s, t, blocks);
        if (t == s)
          for (auto& b : blocks)
            for (int k = 0; k < 3; ++k)
              for (int l = k; l < 3; ++l) b[k][l] = b[l][k] = 0.25 * (b[k][l] + b[l][k]);
        for (const auto& a : sp.terms[s])
          for (const auto& b : sp.terms[t]) {
            const double c = a.coef * b.coef;
            for (int o = 0; o < nout; ++o) upper[o](a.dof, b.dof) += c * blocks[o][a.k][b.k];
          }
      }
    });
  }
  for (auto& m : upper) {
    MatrixXc full = m + m.transpose();
    m = std::move(full);
  }
  return upper;
}

void check_kappa(cplx kappa) {
  if (kappa == cplx(0.0)) throw std::invalid_argument("single/double layer assembly needs kappa != 0");
}

}  // namespace

LayerPair assemble_layers(const TraceSpace& space, cplx kappa, const QuadratureOptions& q) {
  check_kappa(kappa);
  const KernelSpec kernel = KernelSpec::helmholtz(kappa);
  const auto& tris = space.support->tris;
  auto m = assemble_symmetric(space, 2, [&](int s, int t, std::vector<Block>& out) {
    const PairBlocks pb = pair_blocks(tris[s], tris[t], kernel, true, q);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        out[0][k][l] = -kI * kappa * pb.vector[k][l] + kI / kappa * pb.scalar;
        out[1][k][l] = pb.dlp[k][l];
      }
  });
  return {std::move(m[0]), std::move(m[1])};
}

MatrixXc assemble_single_layer(const TraceSpace& space, cplx kappa, const QuadratureOptions& q) {
  const auto terms = assemble_single_layer_terms(space, kappa, q);
  return -kI * kappa * terms.vector + kI / kappa * terms.scalar;
}

SingleLayerTerms assemble_single_layer_terms(const TraceSpace& space, cplx kappa, const QuadratureOptions& q) {
  check_kappa(kappa);
  const KernelSpec kernel = KernelSpec::helmholtz(kappa);
  const auto& tris = space.support->tris;
  auto m = assemble_symmetric(space, 2, [&](int s, int t, std::vector<Block>& out) {
    const PairBlocks pb = pair_blocks(tris[s], tris[t], kernel, false, q);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        out[0][k][l] = pb.vector[k][l];
        out[1][k][l] = pb.scalar;
      }
  });
  return {std::move(m[0]), std::move(m[1])};
}

MatrixXc assemble_double_layer_pv(const TraceSpace& space, cplx kappa, const QuadratureOptions& q) {
  check_kappa(kappa);
  const KernelSpec kernel = KernelSpec::helmholtz(kappa);
  const auto& tris = space.support->tris;
  auto m = assemble_symmetric(space, 1, [&](int s, int t, std::vector<Block>& out) {
    out[0] = pair_blocks(tris[s], tris[t], kernel, true, q).dlp;
  });
  return std::move(m[0]);
}

Eigen::MatrixXd assemble_energy_block(const TraceSpace& space, double kappa0, const QuadratureOptions& q) {
  const KernelSpec kernel = KernelSpec::decaying(kappa0);
  const auto& tris = space.support->tris;
  auto m = assemble_symmetric(space, 1, [&](int s, int t, std::vector<Block>& out) {
    const PairBlocks pb = pair_blocks(tris[s], tris[t], kernel, false, q);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) out[0][k][l] = kappa0 * pb.vector[k][l] + pb.scalar / kappa0;
  });
  return m[0].real();
}

EnergyMatrix assemble_energy(const spaces::MultiTraceSpace& space, double kappa0, const QuadratureOptions& q) {
  EnergyMatrix e;
  for (const auto& sp : space.domains) e.blocks.push_back(assemble_energy_block(sp, kappa0, q));
  return e;
}

double EnergyMatrix::quadratic_form(const spaces::MultiTraceSpace& space, const VectorXc& u) const {
  if (u.size() != space.size()) throw std::invalid_argument("energy: vector size mismatch");
  double sum = 0.0;
  for (std::size_t d = 0; d < blocks.size(); ++d) {
    const int n = space.dim(static_cast<int>(d));
    for (int c = 0; c < 2; ++c) {
      const auto seg = u.segment(space.index(static_cast<int>(d), c, 0), n);
      const Eigen::VectorXd re = seg.real(), im = seg.imag();
      sum += re.dot(blocks[d] * re) + im.dot(blocks[d] * im);
    }
  }
  return sum;
}

Eigen::MatrixXd EnergyMatrix::dense(const spaces::MultiTraceSpace& space) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(space.size(), space.size());
  for (std::size_t d = 0; d < blocks.size(); ++d) {
    const int n = space.dim(static_cast<int>(d));
    for (int c = 0; c < 2; ++c) {
      const int o = space.index(static_cast<int>(d), c, 0);
      m.block(o, o, n, n) = blocks[d];
    }
  }
  return m;
}

}  // namespace pmchwt::operators
