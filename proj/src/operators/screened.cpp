#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pmchwt/operators.hpp"
#include "pmchwt/parallel.hpp"

namespace pmchwt::operators {

using spaces::MultiTraceSpace;
using spaces::TriangleGeom;

namespace {

struct TriRef {
  int domain;
  int tri;
};

/// Uniform grid over triangle centroids.
class CentroidGrid {
 public:
  CentroidGrid(const std::vector<const TriangleGeom*>& tris, double cell) : tris_(tris), cell_(cell) {
    for (std::size_t i = 0; i < tris.size(); ++i) cells_[key(cell_of(tris[i]->centroid))].push_back(static_cast<int>(i));
  }

  /// Indices with centroid within `radius` of x, ascending. radius <= cell.
  void query(const Vec3& x, double radius, std::vector<int>& out) const {
    out.clear();
    const auto c = cell_of(x);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == cells_.end()) continue;
          for (int i : it->second)
            if ((tris_[i]->centroid - x).norm() <= radius) out.push_back(i);
        }
    std::sort(out.begin(), out.end());
  }

 private:
  std::array<long, 3> cell_of(const Vec3& x) const {
    return {static_cast<long>(std::floor(x[0] / cell_)), static_cast<long>(std::floor(x[1] / cell_)),
            static_cast<long>(std::floor(x[2] / cell_))};
  }
  static long key(const std::array<long, 3>& c) {
    return ((c[0] + (1L << 20)) << 42) ^ ((c[1] + (1L << 20)) << 21) ^ (c[2] + (1L << 20));
  }

  const std::vector<const TriangleGeom*>& tris_;
  double cell_;
  std::unordered_map<long, std::vector<int>> cells_;
};

std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0x3ff;
  v = (v | (v << 16)) & 0x30000ff;
  v = (v | (v << 8)) & 0x300f00f;
  v = (v | (v << 4)) & 0x30c30c3;
  v = (v | (v << 2)) & 0x9249249;
  return v;
}

/// Sparse row fragment of one test triangle: trial dof -> value per test slot.
struct SlotRow {
  std::vector<int> cols;
  std::vector<std::array<double, 3>> vals;
};

}  // namespace

ScreenedMatrix assemble_screened(const MultiTraceSpace& test, const MultiTraceSpace& trial, const KernelSpec& kernel,
                                 const QuadratureOptions& q) {
  if (kernel.kind != KernelKind::screened) throw std::invalid_argument("assemble_screened: needs a screened kernel");
  for (const auto* ms : {&test, &trial})
    for (const auto& sp : ms->domains)
      if (sp.size() > 0 && sp.flavour != spaces::Flavour::bc)
        throw std::invalid_argument("assemble_screened: both spaces must be BC flavour");
  const double delta = kernel.delta;
  const double cutoff = kernel.cutoff_factor * delta;

  // trial triangles over all domains
  std::vector<TriRef> trial_refs;
  std::vector<const TriangleGeom*> trial_geo;
  double rmax = 0.0;
  for (std::size_t d = 0; d < trial.domains.size(); ++d) {
    const auto& sp = trial.domains[d];
    if (sp.size() == 0) continue;
    for (std::size_t t = 0; t < sp.support->size(); ++t) {
      if (sp.terms[t].empty()) continue;
      trial_refs.push_back({static_cast<int>(d), static_cast<int>(t)});
      trial_geo.push_back(&sp.support->tris[t]);
      rmax = std::max(rmax, sp.support->tris[t].radius);
    }
  }
  for (const auto& sp : test.domains)
    if (sp.size() > 0)
      for (const auto& g : sp.support->tris) rmax = std::max(rmax, g.radius);
  const double reach = cutoff + 2.0 * rmax;
  CentroidGrid grid(trial_geo, reach);

  // test triangles and their dofs
  std::vector<TriRef> test_refs;
  struct Use {
    int tri, k;
    double coef;
  };
  const int nrows = test.scalar_size(), ncols = trial.scalar_size();
  std::vector<std::vector<Use>> row_uses(nrows);
  std::vector<Vec3> row_point(nrows, Vec3::Zero());
  for (std::size_t d = 0; d < test.domains.size(); ++d) {
    const auto& sp = test.domains[d];
    if (sp.size() == 0) continue;
    for (std::size_t t = 0; t < sp.support->size(); ++t) {
      if (sp.terms[t].empty()) continue;
      const int idx = static_cast<int>(test_refs.size());
      test_refs.push_back({static_cast<int>(d), static_cast<int>(t)});
      for (const auto& term : sp.terms[t]) row_uses[test.offset[d] + term.dof].push_back({idx, term.k, term.coef});
    }
    for (int k = 0; k < sp.size(); ++k) {
      const auto& e = sp.edges.edges[sp.dof_edge[k]];
      row_point[test.offset[d] + k] = 0.5 * (sp.surface->vertices[e.v[0]] + sp.surface->vertices[e.v[1]]);
    }
  }

  // rows in Morton order, processed in blocks so only a local set of fragments is alive
  Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
  for (const auto& p : row_point) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double span = std::max(1e-12, (hi - lo).maxCoeff());
  std::vector<std::pair<std::uint64_t, int>> order(nrows);
  for (int r = 0; r < nrows; ++r) {
    const Vec3 u = (row_point[r] - lo) / span * 1023.0;
    order[r] = {spread_bits(static_cast<std::uint64_t>(u[0])) | (spread_bits(static_cast<std::uint64_t>(u[1])) << 1) |
                    (spread_bits(static_cast<std::uint64_t>(u[2])) << 2),
                r};
  }
  std::sort(order.begin(), order.end());

  struct Workspace {
    std::vector<double> acc;
    std::vector<char> mark;
    std::vector<int> touched, cand;
  };
  auto fragment = [&](int idx, Workspace& ws) {
    const auto& tr = test_refs[idx];
    const TriangleGeom& gs = test.domains[tr.domain].support->tris[tr.tri];
    grid.query(gs.centroid, cutoff + gs.radius + rmax, ws.cand);
    ws.touched.clear();
    for (int c : ws.cand) {
      const TriangleGeom& gt = *trial_geo[c];
      if ((gs.centroid - gt.centroid).norm() - gs.radius - gt.radius > cutoff) continue;
      const PairBlocks pb = pair_blocks(gs, gt, kernel, false, q);
      const auto& ref = trial_refs[c];
      const int off = trial.offset[ref.domain];
      for (const auto& b : trial.domains[ref.domain].terms[ref.tri]) {
        const int col = off + b.dof;
        if (!ws.mark[col]) {
          ws.mark[col] = 1;
          ws.touched.push_back(col);
        }
        for (int k = 0; k < 3; ++k)
          ws.acc[3 * col + k] += b.coef * (pb.vector[k][b.k].real() / delta + delta * pb.scalar.real());
      }
    }
    std::sort(ws.touched.begin(), ws.touched.end());
    SlotRow row;
    row.cols.reserve(ws.touched.size());
    row.vals.reserve(ws.touched.size());
    for (int col : ws.touched) {
      double* a = &ws.acc[3 * col];
      row.cols.push_back(col);
      row.vals.push_back({a[0], a[1], a[2]});
      a[0] = a[1] = a[2] = 0.0;
      ws.mark[col] = 0;
    }
    return row;
  };

  std::vector<std::vector<std::pair<int, double>>> rows(nrows);
  const std::size_t block = 512;
  std::vector<int> block_tris;
  std::vector<int> slot(test_refs.size(), -1);
  const int nw = std::max(1, parallel::threads());
  std::vector<Workspace> work(nw);
  for (auto& ws : work) {
    ws.acc.assign(3 * static_cast<std::size_t>(ncols), 0.0);
    ws.mark.assign(ncols, 0);
  }
  for (std::size_t b0 = 0; b0 < order.size(); b0 += block) {
    const std::size_t b1 = std::min(order.size(), b0 + block);
    block_tris.clear();
    for (std::size_t i = b0; i < b1; ++i)
      for (const auto& u : row_uses[order[i].second])
        if (slot[u.tri] < 0) {
          slot[u.tri] = static_cast<int>(block_tris.size());
          block_tris.push_back(u.tri);
        }
    std::vector<SlotRow> frags(block_tris.size());
    const std::size_t per = (block_tris.size() + nw - 1) / nw;
    parallel::for_each(0, nw, [&](std::size_t w) {
      const std::size_t a = w * per, e = std::min(block_tris.size(), a + per);
      for (std::size_t i = a; i < e; ++i) frags[i] = fragment(block_tris[i], work[w]);
    });
    parallel::for_each(0, nw, [&](std::size_t w) {
      const std::size_t count = b1 - b0;
      const std::size_t rper = (count + nw - 1) / nw;
      Workspace& ws = work[w];
      for (std::size_t i = b0 + w * rper; i < std::min(b1, b0 + (w + 1) * rper); ++i) {
        const int r = order[i].second;
        ws.touched.clear();
        for (const auto& u : row_uses[r]) {
          const SlotRow& f = frags[slot[u.tri]];
          for (std::size_t j = 0; j < f.cols.size(); ++j) {
            const int col = f.cols[j];
            if (!ws.mark[col]) {
              ws.mark[col] = 1;
              ws.touched.push_back(col);
            }
            ws.acc[col] += u.coef * f.vals[j][u.k];
          }
        }
        std::sort(ws.touched.begin(), ws.touched.end());
        auto& row = rows[r];
        row.reserve(ws.touched.size());
        for (int col : ws.touched) {
          if (ws.acc[col] != 0.0) row.emplace_back(col, ws.acc[col]);
          ws.acc[col] = 0.0;
          ws.mark[col] = 0;
        }
      }
    });
    for (int t : block_tris) slot[t] = -1;
  }

  std::vector<Eigen::Triplet<double>> trip;
  std::size_t nnz = 0;
  for (const auto& r : rows) nnz += r.size();
  trip.reserve(nnz);
  for (int r = 0; r < nrows; ++r)
    for (const auto& [c, v] : rows[r]) trip.emplace_back(r, c, v);
  ScreenedMatrix out;
  out.scalar.resize(nrows, ncols);
  out.scalar.setFromTriplets(trip.begin(), trip.end());
  out.test_offset = test.offset;
  out.trial_offset = trial.offset;
  return out;
}

VectorXc ScreenedMatrix::apply(const VectorXc& x) const {
  if (x.size() != cols()) throw std::invalid_argument("ScreenedMatrix::apply: size mismatch");
  const int nc = static_cast<int>(scalar.cols()), nr = static_cast<int>(scalar.rows());
  VectorXc xm(nc), xj(nc);
  for (std::size_t d = 0; d + 1 < trial_offset.size(); ++d) {
    const int n = trial_offset[d + 1] - trial_offset[d];
    xm.segment(trial_offset[d], n) = x.segment(2 * trial_offset[d], n);
    xj.segment(trial_offset[d], n) = x.segment(2 * trial_offset[d] + n, n);
  }
  const VectorXc ym = spaces::multiply(scalar, xj);
  const VectorXc yj = -spaces::multiply(scalar, xm);
  VectorXc y(2 * nr);
  for (std::size_t d = 0; d + 1 < test_offset.size(); ++d) {
    const int n = test_offset[d + 1] - test_offset[d];
    y.segment(2 * test_offset[d], n) = ym.segment(test_offset[d], n);
    y.segment(2 * test_offset[d] + n, n) = yj.segment(test_offset[d], n);
  }
  return y;
}

spaces::SparseMatrix ScreenedMatrix::expanded() const {
  auto row_of = [&](int r, int comp) {
    const auto it = std::upper_bound(test_offset.begin(), test_offset.end(), r) - 1;
    const int d = static_cast<int>(it - test_offset.begin());
    const int n = test_offset[d + 1] - test_offset[d];
    return 2 * test_offset[d] + comp * n + (r - test_offset[d]);
  };
  auto col_of = [&](int c, int comp) {
    const auto it = std::upper_bound(trial_offset.begin(), trial_offset.end(), c) - 1;
    const int d = static_cast<int>(it - trial_offset.begin());
    const int n = trial_offset[d + 1] - trial_offset[d];
    return 2 * trial_offset[d] + comp * n + (c - trial_offset[d]);
  };
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * scalar.nonZeros());
  for (int c = 0; c < scalar.outerSize(); ++c)
    for (spaces::SparseMatrix::InnerIterator it(scalar, c); it; ++it) {
      const int r = static_cast<int>(it.row());
      trip.emplace_back(row_of(r, 0), col_of(c, 1), it.value());
      trip.emplace_back(row_of(r, 1), col_of(c, 0), -it.value());
    }
  spaces::SparseMatrix m(rows(), cols());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

double ScreenedMatrix::nnz_per_column() const {
  return scalar.cols() == 0 ? 0.0 : static_cast<double>(scalar.nonZeros()) / static_cast<double>(scalar.cols());
}

}  // namespace pmchwt::operators
