#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "pmchwt/cli.hpp"

namespace pmchwt::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

/// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt(cplx v) { return "(" + fmt(v.real()) + "," + fmt(v.imag()) + ")"; }

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

class LineError {
 public:
  LineError(int line, std::string key) : line_(line), key_(std::move(key)) {}
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "config line " << line_ << ", key '" << key_ << "': " << what;
    throw ConfigError(msg.str());
  }

 private:
  int line_;
  std::string key_;
};

double parse_real(const std::string& s, const LineError& err) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) err.fail("not a number: '" + t + "'");
  return v;
}

int parse_int(const std::string& s, const LineError& err) {
  const std::string t = trim(s);
  int v = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) err.fail("not an integer: '" + t + "'");
  return v;
}

/// "a" or "(a, b)".
cplx parse_complex(const std::string& s, const LineError& err) {
  const std::string t = trim(s);
  if (!t.empty() && t.front() == '(') {
    if (t.back() != ')') err.fail("unbalanced parenthesis in '" + t + "'");
    const auto comma = t.find(',');
    if (comma == std::string::npos) err.fail("complex value needs '(re, im)'");
    return {parse_real(t.substr(1, comma - 1), err), parse_real(t.substr(comma + 1, t.size() - comma - 2), err)};
  }
  return parse_real(t, err);
}

std::vector<double> parse_list(const std::string& s, const LineError& err) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, err));
  if (out.empty()) err.fail("empty list");
  return out;
}

bool parse_bool(const std::string& s, const LineError& err) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "on") return true;
  if (t == "false" || t == "0" || t == "off") return false;
  err.fail("expected true or false, got '" + t + "'");
}

Experiment parse_experiment(const std::string& s, const LineError& err) {
  for (auto e : {Experiment::mie, Experiment::convergence, Experiment::extinction, Experiment::iterations,
                 Experiment::resonance, Experiment::identity, Experiment::delta})
    if (s == to_string(e)) return e;
  err.fail("unknown experiment '" + s + "'");
}

}  // namespace

std::vector<double> KappaSweep::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return v;
}

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::mie: return "mie";
    case Experiment::convergence: return "convergence";
    case Experiment::extinction: return "extinction";
    case Experiment::iterations: return "iterations";
    case Experiment::resonance: return "resonance";
    case Experiment::identity: return "identity";
    case Experiment::delta: return "delta";
  }
  return "?";
}

const char* to_string(GeometryKind g) {
  switch (g) {
    case GeometryKind::two_cubes: return "two_cubes";
    case GeometryKind::split_sphere: return "split_sphere";
    case GeometryKind::sphere: return "sphere";
    case GeometryKind::file: return "file";
  }
  return "?";
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("experiment", to_string(experiment));
  e.emplace_back("geometry", geometry == GeometryKind::file ? mesh_path : to_string(geometry));
  if (geometry == GeometryKind::split_sphere)
    e.emplace_back("split", split == geometry::SphereSplit::quadrant ? "quadrant" : "half");
  if (sweep)
    e.emplace_back("kappa0_sweep", fmt(sweep->start) + ", " + fmt(sweep->stop) + ", " + std::to_string(sweep->count));
  else
    e.emplace_back("kappa0", fmt(kappa0));
  e.emplace_back("h", join(h));
  if (!delta.empty())
    e.emplace_back("delta", join(delta));
  else
    e.emplace_back("delta_factor", join(delta_factor));
  e.emplace_back("cutoff_factor", fmt(cutoff_factor));
  e.emplace_back("screening", screening == operators::Screening::gaussian ? "gaussian" : "literal");
  e.emplace_back("identity_term", identity_term ? "true" : "false");
  e.emplace_back("background_only", background_only ? "true" : "false");
  e.emplace_back("gmres_tol", fmt(tol));
  e.emplace_back("gmres_maxit", std::to_string(maxit));
  e.emplace_back("angles", std::to_string(angles));
  e.emplace_back("radius", fmt(radius));
  for (std::size_t d = 0; d < materials.size(); ++d) {
    e.emplace_back("domain." + std::to_string(d) + ".eps_r", fmt(materials[d].eps_r));
    e.emplace_back("domain." + std::to_string(d) + ".mu_r", fmt(materials[d].mu_r));
  }
  return e;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& [k, v] : echo())
    for (char c : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> ExperimentConfig::deltas_for(double hh) const {
  if (!delta.empty()) return delta;
  std::vector<double> out;
  for (double f : delta_factor) out.push_back(f * hh);
  return out;
}

std::vector<operators::Material> ExperimentConfig::materials_for(int domain_count) const {
  std::vector<operators::Material> out;
  for (int d = 0; d < domain_count; ++d) {
    const int src = background_only ? 0 : d;
    const DomainMaterial m = src < static_cast<int>(materials.size()) ? materials[src] : DomainMaterial{};
    out.push_back(operators::Material::relative(m.eps_r, m.mu_r));
  }
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0, domain = -1;
  bool has_experiment = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      const LineError err(lineno, line);
      if (line.back() != ']' || line.rfind("[domain.", 0) != 0) err.fail("sections must read [domain.N]");
      domain = parse_int(line.substr(8, line.size() - 9), err);
      if (domain < 0) err.fail("negative domain index");
      if (static_cast<int>(c.materials.size()) <= domain) c.materials.resize(domain + 1);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) LineError(lineno, line).fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const LineError err(lineno, key);
    const std::string scoped = domain >= 0 ? "domain." + std::to_string(domain) + "." + key : key;
    if (!seen.insert(scoped).second) err.fail("given twice");
    if (value.empty()) err.fail("missing value");

    if (domain >= 0) {
      if (key == "eps_r")
        c.materials[domain].eps_r = parse_complex(value, err);
      else if (key == "mu_r")
        c.materials[domain].mu_r = parse_complex(value, err);
      else
        err.fail("unknown key in a domain section (eps_r, mu_r)");
      continue;
    }
    if (key == "experiment") {
      c.experiment = parse_experiment(value, err);
      has_experiment = true;
    } else if (key == "geometry") {
      if (value == "two_cubes")
        c.geometry = GeometryKind::two_cubes;
      else if (value == "split_sphere")
        c.geometry = GeometryKind::split_sphere;
      else if (value == "sphere")
        c.geometry = GeometryKind::sphere;
      else {
        c.geometry = GeometryKind::file;
        c.mesh_path = value;
      }
    } else if (key == "split") {
      if (value == "half")
        c.split = geometry::SphereSplit::half;
      else if (value == "quadrant")
        c.split = geometry::SphereSplit::quadrant;
      else
        err.fail("expected half or quadrant");
    } else if (key == "kappa0") {
      c.kappa0 = parse_real(value, err);
    } else if (key == "kappa0_sweep") {
      const auto v = parse_list(value, err);
      if (v.size() != 3 || v[2] != std::floor(v[2])) err.fail("expected 'start, stop, count'");
      c.sweep = KappaSweep{v[0], v[1], static_cast<int>(v[2])};
    } else if (key == "h") {
      c.h = parse_list(value, err);
    } else if (key == "delta") {
      c.delta = parse_list(value, err);
    } else if (key == "delta_factor") {
      c.delta_factor = parse_list(value, err);
    } else if (key == "cutoff_factor") {
      c.cutoff_factor = parse_real(value, err);
    } else if (key == "screening") {
      if (value == "gaussian")
        c.screening = operators::Screening::gaussian;
      else if (value == "literal")
        c.screening = operators::Screening::literal;
      else
        err.fail("expected gaussian or literal");
    } else if (key == "identity_term") {
      c.identity_term = parse_bool(value, err);
    } else if (key == "background_only") {
      c.background_only = parse_bool(value, err);
    } else if (key == "gmres_tol") {
      c.tol = parse_real(value, err);
    } else if (key == "gmres_maxit") {
      c.maxit = parse_int(value, err);
    } else if (key == "angles") {
      c.angles = parse_int(value, err);
    } else if (key == "radius") {
      c.radius = parse_real(value, err);
    } else if (key == "output") {
      c.output = value;
    } else {
      err.fail("unknown key");
    }
  }
  if (!has_experiment) throw ConfigError("config: key 'experiment' is required");
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
  };
  if (c.h.empty()) fail("h", "at least one mesh size is required");
  for (double v : c.h)
    if (!(v > 0.0) || v > 0.5) fail("h", "mesh sizes must lie in (0, 0.5]");
  for (double v : c.delta)
    if (!(v > 0.0)) fail("delta", "ranges must be positive");
  if (c.delta_factor.empty()) fail("delta_factor", "empty list");
  for (double v : c.delta_factor)
    if (!(v > 0.0)) fail("delta_factor", "factors must be positive");
  if (!(c.cutoff_factor > 0.0)) fail("cutoff_factor", "must be positive");
  if (c.sweep) {
    if (!(c.sweep->start > 0.0) || !(c.sweep->stop >= c.sweep->start)) fail("kappa0_sweep", "need 0 < start <= stop");
    if (c.sweep->count < 1) fail("kappa0_sweep", "count must be at least 1");
  } else if (!(c.kappa0 > 0.0)) {
    fail("kappa0", "must be positive");
  }
  if (!(c.tol > 0.0) || c.tol >= 1.0) fail("gmres_tol", "must lie in (0, 1)");
  if (c.maxit < 1) fail("gmres_maxit", "must be at least 1");
  if (c.angles < 2) fail("angles", "need at least 2");
  if (!(c.radius > 0.0)) fail("radius", "must be positive");
  for (std::size_t d = 0; d < c.materials.size(); ++d)
    if (!(c.materials[d].eps_r.real() > 0.0) || !(c.materials[d].mu_r.real() > 0.0))
      fail("domain." + std::to_string(d), "eps_r and mu_r need positive real parts");
  if (c.experiment == Experiment::resonance && !c.sweep) fail("kappa0_sweep", "the resonance experiment needs a sweep");
  if (c.experiment != Experiment::resonance && c.sweep) fail("kappa0_sweep", "only the resonance experiment sweeps");
  if (c.experiment == Experiment::mie && c.geometry == GeometryKind::two_cubes)
    fail("geometry", "the Mie comparison needs a sphere geometry");
  if (c.experiment == Experiment::convergence && c.h.size() < 2)
    fail("h", "the convergence experiment needs a reference and at least one coarser mesh");
  if (c.experiment == Experiment::identity && c.geometry != GeometryKind::two_cubes)
    fail("geometry", "the identity experiment runs on two_cubes");
}

geometry::SkeletonMesh make_mesh(const ExperimentConfig& c, double h) {
  switch (c.geometry) {
    case GeometryKind::two_cubes: return geometry::make_two_cubes(h);
    case GeometryKind::split_sphere: return geometry::make_split_sphere(h, c.split);
    case GeometryKind::sphere: return geometry::make_split_sphere(h, geometry::SphereSplit::none);
    case GeometryKind::file: return geometry::load_mesh(c.mesh_path);
  }
  throw std::logic_error("make_mesh: unknown geometry");
}

}  // namespace pmchwt::cli
