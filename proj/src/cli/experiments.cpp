#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pmchwt/cli.hpp"

namespace pmchwt::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// CSV with a `# config:` header block. Every row ends with version and config hash.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const ExperimentConfig& c, const std::vector<std::string>& columns)
      : out_(path), version_(kVersion), hash_(c.hash()) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    out_ << "# config:\n";
    for (const auto& [k, v] : c.echo()) out_ << "#   " << k << " = " << v << '\n';
    out_ << "# version = " << version_ << "\n# config_hash = " << hash_ << '\n';
    for (const auto& col : columns) out_ << col << ',';
    out_ << "version,config_hash\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (const auto& cell : cells) out_ << cell << ',';
    out_ << version_ << ',' << hash_ << '\n';
  }

 private:
  std::ofstream out_;
  std::string version_, hash_;
};

std::string quoted(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& c, const std::string& out_dir, std::ostream& log) {
  validate(c);
  std::filesystem::create_directories(out_dir);
  const std::string stem = (std::filesystem::path(out_dir) / to_string(c.experiment)).string();
  std::vector<std::string> written;
  auto open = [&](const std::string& suffix, const std::vector<std::string>& cols) {
    written.push_back(stem + suffix + ".csv");
    return CsvWriter(written.back(), c, cols);
  };
  // wall times go to a separate file so the result CSV is reproducible bit for bit
  auto timing = [&](const std::vector<std::pair<double, double>>& rows) {
    auto t = open("_timing", {"parameter", "wall_time_s"});
    for (const auto& [x, s] : rows) t.row({num(x), num(s)});
  };

  switch (c.experiment) {
    case Experiment::mie: {
      const auto r = run_mie(c, log);
      auto csv = open("", {"theta_deg", "rcs_solver", "rcs_mie", "rcs_solver_db", "rcs_mie_db"});
      for (std::size_t i = 0; i < r.theta_deg.size(); ++i)
        csv.row({num(r.theta_deg[i]), num(r.rcs_solver[i]), num(r.rcs_mie[i]),
                 num(10.0 * std::log10(std::max(r.rcs_solver[i], 1e-300))),
                 num(10.0 * std::log10(std::max(r.rcs_mie[i], 1e-300)))});
      auto summary = open("_summary", {"h", "dofs", "iterations", "converged", "relative_l2"});
      summary.row({num(c.h.front()), std::to_string(r.dofs), std::to_string(r.iterations),
                   r.converged ? "1" : "0", num(r.relative_l2)});
      timing({{c.h.front(), r.wall_time}});
      break;
    }
    case Experiment::convergence:
    case Experiment::extinction:
    case Experiment::iterations: {
      SweepOptions opt;
      opt.energy_error = c.experiment == Experiment::convergence;
      opt.extinction = c.experiment == Experiment::extinction;
      opt.classic = c.experiment == Experiment::iterations;
      const auto rows = run_h_sweep(c, opt, log);
      std::vector<std::string> cols{"h", "delta", "dofs"};
      if (opt.energy_error) cols.push_back("energy_error");
      if (opt.extinction) cols.push_back("extinction_error");
      if (opt.classic) cols.insert(cols.end(), {"it_classic", "converged_classic"});
      cols.insert(cols.end(), {"it_ql", "converged_ql", "nnz_per_column", "error"});
      auto csv = open("", cols);
      std::vector<std::pair<double, double>> times;
      for (const auto& r : rows) {
        std::vector<std::string> cells{num(r.h), num(r.delta), std::to_string(r.dofs)};
        if (opt.energy_error) cells.push_back(r.energy_error >= 0.0 ? num(r.energy_error) : "");
        if (opt.extinction) cells.push_back(r.extinction_error >= 0.0 ? num(r.extinction_error) : "");
        if (opt.classic)
          cells.insert(cells.end(), {std::to_string(r.iterations_classic), r.converged_classic ? "1" : "0"});
        cells.insert(cells.end(), {std::to_string(r.iterations_ql), r.converged_ql ? "1" : "0",
                                   num(r.nnz_per_column), quoted(r.error)});
        csv.row(cells);
        times.emplace_back(r.h, r.wall_time);
      }
      timing(times);
      break;
    }
    case Experiment::resonance: {
      const auto rows = run_resonance(c, log);
      auto csv = open("", {"kappa0", "dofs", "cond_ql", "cond_classic_preconditioned", "error"});
      for (const auto& r : rows)
        csv.row({num(r.kappa0), std::to_string(r.dofs), num(r.cond_ql), num(r.cond_classic_preconditioned),
                 quoted(r.error)});
      break;
    }
    case Experiment::identity: {
      const auto r = run_identity(c, log);
      auto csv = open("", {"h", "dofs", "identity_term", "iterations", "relative_energy_error"});
      csv.row({num(c.h.front()), std::to_string(r.dofs), "1", std::to_string(r.iterations_with), num(r.error_with)});
      csv.row({num(c.h.front()), std::to_string(r.dofs), "0", std::to_string(r.iterations_without),
               num(r.error_without)});
      auto line = open("_line", {"x", "z", "trace_error_with", "trace_error_without"});
      for (const auto& s : r.line) line.row({num(s.x), num(s.z), num(s.error_with), num(s.error_without)});
      break;
    }
    case Experiment::delta: {
      const auto rows = run_delta_sweep(c, log);
      auto csv = open("", {"h", "delta", "dofs", "iterations", "converged", "nnz_per_column", "error"});
      std::vector<std::pair<double, double>> times;
      for (const auto& r : rows) {
        csv.row({num(r.h), num(r.delta), std::to_string(r.dofs), std::to_string(r.iterations_ql),
                 r.converged_ql ? "1" : "0", num(r.nnz_per_column), quoted(r.error)});
        times.emplace_back(r.delta, r.wall_time);
      }
      timing(times);
      break;
    }
  }
  return written;
}

}  // namespace pmchwt::cli
