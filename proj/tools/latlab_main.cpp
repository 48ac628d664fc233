#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "latlab/config.hpp"
#include "latlab/errors.hpp"
#include "latlab/io.hpp"
#include "latlab/runner.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long long samples = 0;
  int threads = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latlab: lattice counting and spherical-average experiments"};
  app.set_version_flag("--version", latlab::kVersion);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"avg-limit", "averaged ball counts along a diagonal-flow time grid"},
      {"ratio-weighted", "weighted-region spherical-average ratio vs volume target"},
      {"ratio-multiplicative",
       "multiplicative-region ratio with admissible denominator"},
      {"cusp", "capped averaged counts for a cap meeting a great sphere"},
      {"cone-volume", "truncated cone volume against the product star body"},
      {"approximates", "Dirichlet / multiplicative / weighted approximations"},
      {"enumerate", "lattice points inside a Euclidean ball"},
  };

  CliOptions opts;
  for (const auto& [name, description] : experiments) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opts.config_path, "experiment config file")
        ->required();
    sub->add_option("--out-dir", opts.out_dir, "override output directory");
    sub->add_option("--seed", opts.seed, "override the config seed")
        ->trigger_on_parse()
        ->each([&](const std::string&) { opts.seed_set = true; });
    sub->add_option("--samples", opts.samples, "override the sample count");
    sub->add_option("--threads", opts.threads, "worker thread count");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string chosen = app.get_subcommands().front()->get_name();

  try {
    latlab::ExperimentConfig cfg =
        latlab::parse_config(latlab::read_text_file(opts.config_path));
    if (cfg.experiment != chosen) {
      std::cerr << "config declares experiment '" << cfg.experiment
                << "' but subcommand is '" << chosen << "'\n";
      return 1;
    }
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.samples > 0) cfg.samples = opts.samples;
    if (opts.threads > 0) cfg.threads = opts.threads;

    const latlab::RunResult result = latlab::run(cfg);
    for (const std::string& path : result.outputs)
      std::cout << "wrote " << path << "\n";
    std::cout << "rows: " << result.rows << "\n"
              << "pass: " << (result.pass ? "yes" : "no") << "\n";
    return result.exit_code;
  } catch (const latlab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
