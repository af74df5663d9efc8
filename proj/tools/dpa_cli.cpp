#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpa/app.hpp"
#include "dpa/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Deterministic particle solver for nonlocal transport with capped mobility"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out-dir", out_dir, "output directory (overrides output.dir)");
  app.add_option("--override", overrides, "key=value, applied after the file")->allow_extra_args(false)->take_all();

  auto* run = app.add_subcommand("run", "simulate and write snapshots, diagnostics, variational series");
  auto* converge = app.add_subcommand("converge", "L1 Cauchy refinement table");
  std::vector<std::size_t> n_list{50, 100, 200, 400};
  converge->add_option("--n-list", n_list, "ascending N values, each dividing the next")->delimiter(',');
  auto* oracle = app.add_subcommand("oracle-compare", "L1 distance to the finite-volume reference");
  auto* entropy = app.add_subcommand("entropy-check", "entropy functional on the bump test grid");
  auto* edb = app.add_subcommand("edb-check", "discrete energy-dissipation balance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? dpa::kExitOk : dpa::kExitUsage;
  }

  try {
    auto doc = config_path.empty() ? dpa::KeyValueDoc{} : dpa::KeyValueDoc::load(config_path);
    for (const auto& o : overrides) doc.set_override(o);
    if (!out_dir.empty()) doc.set_override("output.dir=" + out_dir);
    const auto cfg = dpa::build_config(doc);
    for (const auto& [a, b] : cfg.problem.initial.support_gaps()) {
      std::cerr << "warning: initial density vanishes on [" << a << ", " << b
                << "]; the equal-mass partition is not unique there\n";
    }

    if (*run) return dpa::run_command(cfg, std::cout);
    if (*converge) return dpa::converge_command(cfg, n_list, std::cout);
    if (*oracle) return dpa::oracle_compare_command(cfg, std::cout);
    if (*entropy) return dpa::entropy_check_command(cfg, std::cout);
    if (*edb) return dpa::edb_check_command(cfg, std::cout);
  } catch (const dpa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return dpa::kExitUsage;
  } catch (const dpa::ValidationError& e) {
    std::cerr << "invalid problem: " << e.what() << '\n';
    return dpa::kExitUsage;
  } catch (const dpa::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return dpa::kExitNumerical;
  } catch (const dpa::CoincidentParticles& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return dpa::kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return dpa::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dpa::kExitNumerical;
  }
  return dpa::kExitUsage;
}
