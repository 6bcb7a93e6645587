#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pmchwt/formulations.hpp"

namespace pmchwt::cli {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { mie, convergence, extinction, iterations, resonance, identity, delta };
enum class GeometryKind { two_cubes, split_sphere, sphere, file };

struct KappaSweep {
  double start = 0.0, stop = 0.0;
  int count = 0;
  std::vector<double> values() const;
};

struct DomainMaterial {
  cplx eps_r{1.0}, mu_r{1.0};
};

struct ExperimentConfig {
  Experiment experiment = Experiment::mie;
  GeometryKind geometry = GeometryKind::two_cubes;
  std::string mesh_path;
  geometry::SphereSplit split = geometry::SphereSplit::half;
  double kappa0 = 1.0;
  std::optional<KappaSweep> sweep;
  std::vector<DomainMaterial> materials;  // index = domain; missing domains are vacuum
  std::vector<double> h;
  std::vector<double> delta;                 // absolute; empty means delta_factor * h
  std::vector<double> delta_factor{1.0};
  double cutoff_factor = 3.5;
  operators::Screening screening = operators::Screening::gaussian;
  bool identity_term = true;
  bool background_only = false;  // every domain takes the domain-0 material
  double tol = 2e-5;
  int maxit = 2000;
  int angles = 181;
  double radius = 1.0;  // sphere radius for the Mie oracle
  std::string output = "out";

  /// Canonical (key, value) listing of every parameter.
  std::vector<std::pair<std::string, std::string>> echo() const;
  /// FNV-1a hash of the canonical listing, hex.
  std::string hash() const;
  /// Range values of delta for mesh size h.
  std::vector<double> deltas_for(double h) const;
  std::vector<operators::Material> materials_for(int domain_count) const;
};

const char* to_string(Experiment e);
const char* to_string(GeometryKind g);

/// Flat `key = value` lines, `#` comments, `[domain.N]` sections holding eps_r and mu_r.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& c);

geometry::SkeletonMesh make_mesh(const ExperimentConfig& c, double h);

/// One solve of a sweep over mesh sizes or ranges.
struct SweepRow {
  double h = 0.0, delta = 0.0;
  int dofs = 0;
  int iterations_ql = 0, iterations_classic = -1;
  bool converged_ql = false, converged_classic = false;
  double energy_error = -1.0;      // relative to the reference solution, -1 when not measured
  double extinction_error = -1.0;  // energy norm of v^g, -1 when not measured
  double nnz_per_column = 0.0;
  double wall_time = 0.0;
  std::string error;  // non-empty when the run failed
};

struct SweepOptions {
  bool classic = false;     // also solve classic PMCHWT (not for the reference run)
  bool energy_error = false;  // finest h becomes the reference solution
  bool extinction = false;
};

std::vector<SweepRow> run_h_sweep(const ExperimentConfig& c, const SweepOptions& opt, std::ostream& log);
std::vector<SweepRow> run_delta_sweep(const ExperimentConfig& c, std::ostream& log);

struct MieResult {
  std::vector<double> theta_deg, rcs_solver, rcs_mie;
  double relative_l2 = 0.0;
  int dofs = 0, iterations = 0;
  bool converged = false;
  double wall_time = 0.0;
};
MieResult run_mie(const ExperimentConfig& c, std::ostream& log);

struct ResonanceRow {
  double kappa0 = 0.0;
  double cond_ql = 0.0, cond_classic_preconditioned = 0.0;
  int dofs = 0;
  std::string error;
};
std::vector<ResonanceRow> run_resonance(const ExperimentConfig& c, std::ostream& log);

struct LineSample {
  double x = 0.0, z = 0.0;  // centroid of a domain-1 boundary triangle cut by the plane y = const
  double error_with = 0.0, error_without = 0.0;  // |m_h - m_exact| at the centroid
};
struct IdentityResult {
  double error_with = 0.0, error_without = 0.0;  // relative energy-norm trace errors
  int iterations_with = 0, iterations_without = 0;
  int dofs = 0;
  std::vector<LineSample> line;
};
IdentityResult run_identity(const ExperimentConfig& c, std::ostream& log);

/// Least-squares slope of log(y) against log(x).
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs the configured experiment and writes its CSV files into `out_dir`.
/// Returns the list of files written.
std::vector<std::string> run_experiment(const ExperimentConfig& c, const std::string& out_dir, std::ostream& log);

}  // namespace pmchwt::cli
