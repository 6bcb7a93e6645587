#include "pmchwt/formulations.hpp"

#include <sstream>
#include <stdexcept>

namespace pmchwt::formulations {

using spaces::MultiTraceSpace;
using spaces::TraceSpace;

namespace {

TraceSpace empty_space(std::shared_ptr<const geometry::OrientedSurfaceMesh> s, spaces::Flavour f) {
  TraceSpace sp;
  sp.flavour = f;
  sp.surface = std::move(s);
  return sp;
}

}  // namespace

Problem build_problem(geometry::SkeletonMesh mesh, std::vector<operators::Material> materials, double kappa0,
                      bool with_bc, const geometry::OwnerOverrides& overrides) {
  geometry::validate(mesh);
  if (static_cast<int>(materials.size()) != mesh.domain_count) {
    std::ostringstream msg;
    msg << "problem: " << materials.size() << " materials given for " << mesh.domain_count << " domains";
    throw std::invalid_argument(msg.str());
  }
  for (const auto& m : materials) operators::validate(m);
  if (!(kappa0 > 0.0)) throw std::invalid_argument("problem: kappa0 must be positive");

  Problem p;
  p.mesh = std::move(mesh);
  p.materials = std::move(materials);
  p.kappa0 = kappa0;
  p.reduced = geometry::reduce_geometry(p.mesh, overrides);

  std::vector<TraceSpace> rwg, bc, rrwg, rbc;
  for (int d = 0; d < p.mesh.domain_count; ++d) {
    auto s = std::make_shared<geometry::OrientedSurfaceMesh>(geometry::build_domain_boundary(p.mesh, d));
    const auto edges = geometry::edge_enumeration(*s);
    rwg.push_back(spaces::rwg_space(s, edges));
    if (with_bc)
      bc.push_back(spaces::bc_space(s, edges,
                                    std::make_shared<geometry::RefinedSurface>(geometry::barycentric_refine(*s))));
  }
  for (int d = 0; d < p.mesh.domain_count; ++d) {
    auto s = std::make_shared<geometry::OrientedSurfaceMesh>(p.reduced.surfaces[d]);
    if (s->triangles.empty()) {
      rrwg.push_back(empty_space(s, spaces::Flavour::rwg));
      if (with_bc) rbc.push_back(empty_space(s, spaces::Flavour::bc));
      continue;
    }
    const auto edges = geometry::edge_enumeration(*s);
    rrwg.push_back(spaces::rwg_space(s, edges));
    if (with_bc)
      rbc.push_back(spaces::bc_space(s, edges,
                                     std::make_shared<geometry::RefinedSurface>(geometry::barycentric_refine(*s))));
  }
  p.rwg = spaces::make_multi(std::move(rwg));
  p.reduced_rwg = spaces::make_multi(std::move(rrwg));
  if (with_bc) {
    p.bc = spaces::make_multi(std::move(bc));
    p.reduced_bc = spaces::make_multi(std::move(rbc));
  }
  p.R = spaces::build_R(p.rwg, p.reduced_rwg);
  return p;
}

int BlockCalderon::size() const {
  int n = 0;
  for (int d : dim) n += 2 * d;
  return n;
}

VectorXc BlockCalderon::apply_A(const VectorXc& x) const {
  if (x.size() != size()) throw std::invalid_argument("BlockCalderon: vector size mismatch");
  VectorXc y(x.size());
  for (std::size_t d = 0; d < T.size(); ++d) {
    const int n = dim[d], o = block[d];
    if (n == 0) continue;
    const auto xm = x.segment(o, n);
    const auto xj = x.segment(o + n, n);
    const VectorXc txm = T[d] * xm, txj = T[d] * xj;
    y.segment(o, n) = K[d] * xm - eta[d] * txj;
    y.segment(o + n, n) = txm / eta[d] + K[d] * xj;
  }
  return y;
}

VectorXc BlockCalderon::apply_gram(const VectorXc& x) const {
  if (x.size() != size()) throw std::invalid_argument("BlockCalderon: vector size mismatch");
  VectorXc y(x.size());
  for (std::size_t d = 0; d < gram.size(); ++d)
    for (int c = 0; c < 2; ++c) {
      const int o = block[d] + c * dim[d];
      y.segment(o, dim[d]) = spaces::multiply(gram[d], x.segment(o, dim[d]));
    }
  return y;
}

VectorXc BlockCalderon::apply_interior(const VectorXc& x, bool identity_term) const {
  VectorXc y = -apply_A(x);
  if (identity_term) y -= 0.5 * apply_gram(x);
  return y;
}

BlockCalderon assemble_block_calderon(const Problem& p, const operators::QuadratureOptions& q, cplx wavenumber_factor) {
  BlockCalderon a;
  for (int d = 0; d < static_cast<int>(p.rwg.domains.size()); ++d) {
    const auto& sp = p.rwg.domains[d];
    auto layers = operators::assemble_layers(sp, wavenumber_factor * p.kappa(d), q);
    a.T.push_back(std::move(layers.T));
    a.K.push_back(std::move(layers.K));
    a.eta.push_back(p.eta(d));
    a.gram.push_back(spaces::gram_cross(sp, sp));
    a.block.push_back(p.rwg.block(d));
    a.dim.push_back(p.rwg.dim(d));
  }
  return a;
}

VectorXc excitation(const Problem& p, const operators::PlaneWave& pw) {
  return operators::planewave_rhs(p.rwg, pw, p.kappa0);
}

LinearSystem classic_pmchwt(const BlockCalderon& a, const spaces::EmbeddingMatrix& R, const VectorXc& e_f) {
  if (R.rows() != a.size() || e_f.size() != a.size())
    throw std::invalid_argument("classic_pmchwt: dimension mismatch between operator, embedding and excitation");
  LinearSystem s;
  s.dim = R.cols();
  s.apply = [&a, &R](const VectorXc& w) { return R.apply_transpose(a.apply_A(R.apply(w))); };
  s.rhs = R.apply_transpose(e_f);
  return s;
}

VectorXc solve_blocks(const std::vector<std::optional<krylov::SparseSolver>>& solvers, const MultiTraceSpace& layout,
                      const VectorXc& v) {
  if (v.size() != layout.size()) throw std::invalid_argument("solve_blocks: vector size mismatch");
  VectorXc y(v.size());
  for (std::size_t d = 0; d < layout.domains.size(); ++d) {
    const int n = layout.dim(static_cast<int>(d));
    if (n == 0) continue;
    for (int c = 0; c < 2; ++c) {
      const int o = layout.index(static_cast<int>(d), c, 0);
      y.segment(o, n) = solvers[d]->solve(VectorXc(v.segment(o, n)));
    }
  }
  return y;
}

std::vector<std::optional<krylov::SparseSolver>> factor_grams(const MultiTraceSpace& test,
                                                              const MultiTraceSpace& trial) {
  std::vector<std::optional<krylov::SparseSolver>> out(test.domains.size());
  for (std::size_t d = 0; d < test.domains.size(); ++d) {
    if (test.domains[d].size() == 0) continue;
    try {
      out[d].emplace(spaces::gram_cross(test.domains[d], trial.domains[d]));
    } catch (const krylov::FactorizationError& e) {
      std::ostringstream msg;
      msg << "mixed Gram of domain " << d << ": " << e.what();
      throw krylov::FactorizationError(msg.str());
    }
  }
  return out;
}

ComposedSystem::ComposedSystem(const Problem& p, const BlockCalderon& a, const QlOptions& opt)
    : p_(&p), a_(&a), R_(&p.R), identity_term_(opt.identity_term) {
  if (!p.has_bc()) throw std::invalid_argument("ql_pmchwt: the problem was built without BC spaces");
  for (std::size_t d = 0; d < p.reduced_rwg.domains.size(); ++d)
    if (p.reduced_rwg.dim(static_cast<int>(d)) != p.reduced_bc.dim(static_cast<int>(d)))
      throw std::invalid_argument("ql_pmchwt: missing BC support on a reduced surface");
  S_ = operators::assemble_screened(p.reduced_bc, p.bc,
                                    operators::KernelSpec::screened(opt.delta, opt.cutoff_factor, opt.screening),
                                    opt.quadrature);
  full_ = factor_grams(p.rwg, p.bc);
  reduced_ = factor_grams(p.reduced_bc, p.reduced_rwg);
}

VectorXc ComposedSystem::full_gram_solve(const VectorXc& v) const { return solve_blocks(full_, p_->rwg, v); }

VectorXc ComposedSystem::regularise(const VectorXc& v) const {
  return solve_blocks(reduced_, p_->reduced_rwg, S_.apply(full_gram_solve(v)));
}

VectorXc ComposedSystem::apply(const VectorXc& w) const {
  return regularise(a_->apply_interior(R_->apply(w), identity_term_));
}

// Physical traces satisfy (-1/2 G - A) R w = -e_f.
VectorXc ComposedSystem::rhs(const VectorXc& e_f) const { return -regularise(e_f); }

LinearSystem ComposedSystem::system(const VectorXc& e_f) const {
  LinearSystem s;
  s.dim = dim();
  s.apply = [this](const VectorXc& w) { return apply(w); };
  s.rhs = rhs(e_f);
  return s;
}

PreconditionedClassic make_preconditioned_classic(const Problem& p, const QlOptions& opt) {
  if (!p.has_bc()) throw std::invalid_argument("preconditioned classic: the problem was built without BC spaces");
  PreconditionedClassic pc;
  pc.S = operators::assemble_screened(p.reduced_bc, p.reduced_bc,
                                      operators::KernelSpec::screened(opt.delta, opt.cutoff_factor, opt.screening),
                                      opt.quadrature);
  pc.reduced_gf = factor_grams(p.reduced_bc, p.reduced_rwg);
  pc.reduced_fg = factor_grams(p.reduced_rwg, p.reduced_bc);
  return pc;
}

VectorXc apply_preconditioned_classic(const PreconditionedClassic& pc, const Problem& p, const BlockCalderon& a,
                                      const VectorXc& w) {
  const VectorXc c = -p.R.apply_transpose(a.apply_A(p.R.apply(w)));
  return solve_blocks(pc.reduced_gf, p.reduced_rwg, pc.S.apply(solve_blocks(pc.reduced_fg, p.reduced_rwg, c)));
}

ExtinctionResidual extinction_residual(const ComposedSystem& sys, const BlockCalderon& a,
                                       const spaces::EmbeddingMatrix& R, const VectorXc& w, const VectorXc& e_f) {
  ExtinctionResidual r;
  r.v_f = a.apply_interior(R.apply(w), true) + e_f;
  r.v_g = sys.full_gram_solve(r.v_f);
  return r;
}

}  // namespace pmchwt::formulations
