#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "pmchwt/cli.hpp"
#include "pmchwt/fields.hpp"

namespace pmchwt::cli {

using formulations::BlockCalderon;
using formulations::ComposedSystem;
using formulations::Problem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

formulations::QlOptions ql_options(const ExperimentConfig& c, double delta, bool identity_term) {
  formulations::QlOptions o;
  o.delta = delta;
  o.cutoff_factor = c.cutoff_factor;
  o.screening = c.screening;
  o.identity_term = identity_term;
  return o;
}

krylov::GmresOptions gmres_options(const ExperimentConfig& c) {
  krylov::GmresOptions o;
  o.tol = c.tol;
  o.maxit = c.maxit;
  return o;
}

Problem make_problem(const ExperimentConfig& c, double h, double kappa0, bool with_bc) {
  auto mesh = make_mesh(c, h);
  const int nd = mesh.domain_count;
  return formulations::build_problem(std::move(mesh), c.materials_for(nd), kappa0, with_bc);
}

struct Solved {
  VectorXc w;
  krylov::SolveReport report;
};

Solved solve(const formulations::LinearSystem& s, const ExperimentConfig& c) {
  auto [w, rep] = krylov::gmres(s.apply, s.rhs, gmres_options(c));
  return {std::move(w), std::move(rep)};
}

/// Dense matrix of an operator, column by column.
MatrixXc materialise(const krylov::Apply& op, int dim) {
  MatrixXc m(dim, dim);
  VectorXc e = VectorXc::Zero(dim);
  for (int j = 0; j < dim; ++j) {
    e[j] = 1.0;
    m.col(j) = op(e);
    e[j] = 0.0;
  }
  return m;
}

}  // namespace

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fitted_slope: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fitted_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<SweepRow> run_h_sweep(const ExperimentConfig& c, const SweepOptions& opt, std::ostream& log) {
  const operators::PlaneWave pw;
  std::vector<SweepRow> rows;
  const double h_ref = *std::min_element(c.h.begin(), c.h.end());
  // kept for the transfer onto the reference mesh
  std::vector<spaces::MultiTraceSpace> spaces_h;
  std::vector<VectorXc> traces_h;
  for (double h : c.h) {
    SweepRow row;
    row.h = h;
    row.delta = c.deltas_for(h).front();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Problem p = make_problem(c, h, c.kappa0, true);
      const BlockCalderon a = formulations::assemble_block_calderon(p);
      const ComposedSystem sys(p, a, ql_options(c, row.delta, c.identity_term));
      row.dofs = sys.dim();
      row.nnz_per_column = sys.screened().nnz_per_column();
      const VectorXc e_f = formulations::excitation(p, pw);
      const Solved ql = solve(sys.system(e_f), c);
      row.iterations_ql = ql.report.iterations;
      row.converged_ql = ql.report.converged;
      const bool reference = opt.energy_error && h == h_ref;
      if (opt.classic && !reference) {
        const Solved cl = solve(formulations::classic_pmchwt(a, p.R, e_f), c);
        row.iterations_classic = cl.report.iterations;
        row.converged_classic = cl.report.converged;
      }
      if (opt.extinction) {
        const auto ex = formulations::extinction_residual(sys, a, p.R, ql.w, e_f);
        const auto energy = operators::assemble_energy(p.bc, c.kappa0);
        row.extinction_error = fields::energy_norm(ex.v_g, p.bc, energy);
      }
      if (opt.energy_error) {
        spaces_h.push_back(p.rwg);
        traces_h.push_back(p.R.apply(ql.w));
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      if (opt.energy_error) {
        spaces_h.emplace_back();
        traces_h.emplace_back();
      }
    }
    row.wall_time = seconds_since(t0);
    log << "h = " << h << ": dofs " << row.dofs << ", QL iterations " << row.iterations_ql;
    if (row.iterations_classic >= 0) log << ", classic iterations " << row.iterations_classic;
    if (row.extinction_error >= 0.0) log << ", extinction " << row.extinction_error;
    if (!row.error.empty()) log << ", failed: " << row.error;
    log << " (" << row.wall_time << " s)" << std::endl;
    rows.push_back(std::move(row));
  }

  if (opt.energy_error) {
    const auto iref = static_cast<std::size_t>(std::find(c.h.begin(), c.h.end(), h_ref) - c.h.begin());
    if (!rows[iref].error.empty()) return rows;
    const auto& ref_space = spaces_h[iref];
    const auto energy = operators::assemble_energy(ref_space, c.kappa0);
    const double ref_norm = fields::energy_norm(traces_h[iref], ref_space, energy);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == iref || !rows[i].error.empty()) continue;
      try {
        const VectorXc u = fields::transfer(spaces_h[i], traces_h[i], ref_space);
        rows[i].energy_error = fields::energy_norm(u - traces_h[iref], ref_space, energy) / ref_norm;
        log << "h = " << rows[i].h << ": energy error " << rows[i].energy_error << std::endl;
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  }
  return rows;
}

std::vector<SweepRow> run_delta_sweep(const ExperimentConfig& c, std::ostream& log) {
  const operators::PlaneWave pw;
  const double h = c.h.front();
  const Problem p = make_problem(c, h, c.kappa0, true);
  const BlockCalderon a = formulations::assemble_block_calderon(p);
  const VectorXc e_f = formulations::excitation(p, pw);
  std::vector<SweepRow> rows;
  for (double delta : c.deltas_for(h)) {
    SweepRow row;
    row.h = h;
    row.delta = delta;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const ComposedSystem sys(p, a, ql_options(c, delta, c.identity_term));
      row.dofs = sys.dim();
      row.nnz_per_column = sys.screened().nnz_per_column();
      const Solved ql = solve(sys.system(e_f), c);
      row.iterations_ql = ql.report.iterations;
      row.converged_ql = ql.report.converged;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.wall_time = seconds_since(t0);
    log << "delta = " << delta << ": QL iterations " << row.iterations_ql << ", nnz per column "
        << row.nnz_per_column << (row.error.empty() ? "" : ", failed: " + row.error) << " (" << row.wall_time
        << " s)" << std::endl;
    rows.push_back(std::move(row));
  }
  return rows;
}

MieResult run_mie(const ExperimentConfig& c, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const operators::PlaneWave pw;
  const double h = c.h.front();
  const Problem p = make_problem(c, h, c.kappa0, true);
  for (std::size_t d = 2; d < p.materials.size(); ++d)
    if (p.materials[d].epsilon != p.materials[1].epsilon || p.materials[d].mu != p.materials[1].mu)
      throw std::invalid_argument("mie: every bounded domain must hold the same material");
  const BlockCalderon a = formulations::assemble_block_calderon(p);
  const ComposedSystem sys(p, a, ql_options(c, c.deltas_for(h).front(), c.identity_term));
  const Solved ql = solve(sys.system(formulations::excitation(p, pw)), c);

  const auto dirs = fields::e_plane(c.angles);
  const auto solver = fields::far_field(p, ql.w, dirs);
  const auto oracle = fields::mie_rcs(c.radius, p.materials[1], p.materials[0], c.kappa0, dirs);
  MieResult r;
  for (const auto& d : dirs) r.theta_deg.push_back(d.theta * 180.0 / kPi);
  r.rcs_solver = solver.rcs;
  r.rcs_mie = oracle.rcs;
  r.relative_l2 = fields::relative_l2(solver.rcs, oracle.rcs);
  r.dofs = sys.dim();
  r.iterations = ql.report.iterations;
  r.converged = ql.report.converged;
  r.wall_time = seconds_since(t0);
  log << "mie: dofs " << r.dofs << ", iterations " << r.iterations << ", relative L2 " << r.relative_l2 << " ("
      << r.wall_time << " s)" << std::endl;
  return r;
}

std::vector<ResonanceRow> run_resonance(const ExperimentConfig& c, std::ostream& log) {
  const double h = c.h.front();
  // geometry, Grams and the screened matrix do not depend on the wavenumber
  Problem p = make_problem(c, h, c.sweep->start, true);
  BlockCalderon a = formulations::assemble_block_calderon(p);
  const ComposedSystem sys(p, a, ql_options(c, c.deltas_for(h).front(), c.identity_term));
  std::vector<ResonanceRow> rows;
  for (double k : c.sweep->values()) {
    ResonanceRow row;
    row.kappa0 = k;
    row.dofs = sys.dim();
    try {
      p.kappa0 = k;
      a = formulations::assemble_block_calderon(p);
      row.cond_ql = krylov::condition_number([&](const VectorXc& w) { return sys.apply(w); }, sys.dim());
      const BlockCalderon ai = formulations::assemble_block_calderon(p, {}, -kI);
      const VectorXc none = VectorXc::Zero(a.size());
      const MatrixXc mk = materialise(formulations::classic_pmchwt(a, p.R, none).apply, sys.dim());
      const MatrixXc mi = materialise(formulations::classic_pmchwt(ai, p.R, none).apply, sys.dim());
      row.cond_classic_preconditioned = krylov::condition_number(MatrixXc(mi.partialPivLu().solve(mk)));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    log << "kappa0 = " << k << ": cond QL " << row.cond_ql << ", cond preconditioned classic "
        << row.cond_classic_preconditioned << (row.error.empty() ? "" : ", failed: " + row.error) << std::endl;
    rows.push_back(std::move(row));
  }
  return rows;
}

IdentityResult run_identity(const ExperimentConfig& c, std::ostream& log) {
  const operators::PlaneWave pw;
  const double h = c.h.front();
  ExperimentConfig bg = c;
  bg.background_only = true;
  const Problem p = make_problem(bg, h, c.kappa0, true);
  const BlockCalderon a = formulations::assemble_block_calderon(p);
  const VectorXc e_f = formulations::excitation(p, pw);
  const VectorXc exact = fields::incident_interpolant(p, pw);
  const auto energy = operators::assemble_energy(p.rwg, c.kappa0);
  const double norm = fields::energy_norm(exact, p.rwg, energy);

  IdentityResult r;
  VectorXc u_with, u_without;
  for (bool identity : {true, false}) {
    const ComposedSystem sys(p, a, ql_options(c, c.deltas_for(h).front(), identity));
    const Solved s = solve(sys.system(e_f), c);
    const VectorXc u = p.R.apply(s.w);
    const double err = fields::energy_norm(u - exact, p.rwg, energy) / norm;
    r.dofs = sys.dim();
    (identity ? r.error_with : r.error_without) = err;
    (identity ? r.iterations_with : r.iterations_without) = s.report.iterations;
    (identity ? u_with : u_without) = u;
    log << "identity term " << (identity ? "on" : "off") << ": iterations " << s.report.iterations
        << ", relative energy error " << err << std::endl;
  }

  // electric trace error on domain-1 boundary triangles cut by the plane y = 0.3
  const auto& sp = p.rwg.domains[1];
  const int n = sp.size();
  const VectorXc ex = fields::domain_traces(p.rwg, exact, 1);
  const auto e_exact = sp.expand(VectorXc(ex.head(n)));
  const auto e_with = sp.expand(VectorXc(fields::domain_traces(p.rwg, u_with, 1).head(n)));
  const auto e_without = sp.expand(VectorXc(fields::domain_traces(p.rwg, u_without, 1).head(n)));
  const double y0 = 0.3;
  for (std::size_t t = 0; t < sp.support->size(); ++t) {
    const auto& g = sp.support->tris[t];
    const double lo = std::min({g.p[0][1], g.p[1][1], g.p[2][1]}), hi = std::max({g.p[0][1], g.p[1][1], g.p[2][1]});
    if (!(lo < y0 && y0 < hi)) continue;
    const int ti = static_cast<int>(t);
    const CVec3 ref = fields::evaluate(sp, e_exact, ti, g.centroid);
    r.line.push_back({g.centroid[0], g.centroid[2], (fields::evaluate(sp, e_with, ti, g.centroid) - ref).norm(),
                      (fields::evaluate(sp, e_without, ti, g.centroid) - ref).norm()});
  }
  std::sort(r.line.begin(), r.line.end(), [](const LineSample& a, const LineSample& b) {
    return a.x != b.x ? a.x < b.x : a.z < b.z;
  });
  return r;
}

}  // namespace pmchwt::cli
