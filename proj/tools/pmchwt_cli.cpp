#include <iostream>

#include <CLI11.hpp>

#include "pmchwt/cli.hpp"
#include "pmchwt/parallel.hpp"

namespace {

pmchwt::geometry::SkeletonMesh generate(const std::string& name, double h, const std::string& split) {
  using namespace pmchwt::geometry;
  if (name == "two_cubes") return make_two_cubes(h);
  if (name == "sphere") return make_split_sphere(h, SphereSplit::none);
  if (name == "split_sphere") {
    if (split == "half") return make_split_sphere(h, SphereSplit::half);
    if (split == "quadrant") return make_split_sphere(h, SphereSplit::quadrant);
    throw pmchwt::cli::ConfigError("unknown split '" + split + "' (half, quadrant)");
  }
  if (name == "tetrahedron") return make_tetrahedron();
  throw pmchwt::cli::ConfigError("unknown generator '" + name + "' (two_cubes, sphere, split_sphere, tetrahedron)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-element solver for composite dielectric scatterers"};
  app.set_version_flag("--version", std::string(pmchwt::cli::kVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  std::string config_path, out_dir;
  int threads = 0;
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config key 'output')");
  run->add_option("--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);

  auto* mesh = app.add_subcommand("mesh", "write a generated mesh");
  std::string generator, split = "half", mesh_out;
  double h = 0.0;
  mesh->add_option("generator", generator, "two_cubes | sphere | split_sphere | tetrahedron")->required();
  mesh->add_option("edge_length", h, "target edge length h [m]")->required();
  mesh->add_option("--split", split, "half | quadrant (split_sphere only)");
  mesh->add_option("--out", mesh_out, "output mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  pmchwt::cli::ExperimentConfig cfg;
  try {
    if (run->parsed()) {
      cfg = pmchwt::cli::load_config(config_path);
      if (!out_dir.empty()) cfg.output = out_dir;
    } else {
      const auto m = generate(generator, h, split);
      pmchwt::geometry::write_mesh(m, mesh_out);
      std::cout << "wrote " << mesh_out << " (" << m.vertices.size() << " vertices, " << m.triangles.size()
                << " triangles, " << m.domain_count << " domains)\n";
      return 0;
    }
  } catch (const pmchwt::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (threads > 0) pmchwt::parallel::set_threads(threads);
    for (const auto& f : pmchwt::cli::run_experiment(cfg, cfg.output, std::cout)) std::cout << "wrote " << f << '\n';
  } catch (const pmchwt::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
