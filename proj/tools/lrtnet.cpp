// lrtnet: train two-layer binary classifiers with the difference criterion
// (or the hinge baseline) and compare them against the likelihood ratio test.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lrtnet/config.hpp"
#include "lrtnet/oracle.hpp"
#include "lrtnet/run.hpp"

namespace {

using lrtnet::ConfigError;
using lrtnet::RunConfig;

struct Source {
  std::string config_path;
  std::string preset;
};

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("--config", src.config_path, "JSON run configuration");
  cmd->add_option("--preset", src.preset, "named experiment preset (config keys override it)");
}

// Preset (if any) is the base; the config file overrides individual keys.
RunConfig resolve(const Source& src) {
  if (src.config_path.empty() && src.preset.empty())
    throw ConfigError("--config", "one of --config or --preset is required");
  RunConfig base = src.preset.empty() ? RunConfig{} : lrtnet::preset(src.preset);
  return src.config_path.empty() ? base : lrtnet::load_config(src.config_path, base);
}

int report_config_error(const ConfigError& e) {
  std::cerr << e.what() << '\n';
  return lrtnet::kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lrtnet: LRT-consistent training of two-layer binary classifiers"};
  app.require_subcommand(1);

  Source run_src;
  bool compare = false;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "train a configuration and write its artifacts");
  add_source(run, run_src);
  run->add_flag("--compare", compare, "train every contender of the experiment from the same initialization");
  run->add_option("--out-dir", out_dir, "artifact directory (overrides output.dir)");

  Source oracle_src;
  std::size_t mc_samples = 100000;
  auto* oracle = app.add_subcommand("oracle", "print LRT error probabilities and the criterion upper bound");
  add_source(oracle, oracle_src);
  oracle->add_option("--mc-samples", mc_samples, "Monte Carlo samples per class")->check(CLI::PositiveNumber);

  Source validate_src;
  bool print = false;
  auto* validate = app.add_subcommand("validate", "check a configuration without running it");
  add_source(validate, validate_src);
  validate->add_flag("--print", print, "print the resolved configuration as JSON");

  app.add_subcommand("presets", "list the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; malformed command lines are config errors.
    const int code = app.exit(e);
    return code == 0 ? lrtnet::kExitOk : lrtnet::kExitConfig;
  }

  try {
    if (*run) {
      RunConfig cfg = resolve(run_src);
      if (!out_dir.empty()) cfg.output.dir = out_dir;
      return lrtnet::run_command(cfg, compare, std::cout, std::cerr);
    }

    if (*validate) {
      const RunConfig cfg = resolve(validate_src);
      const auto violations = lrtnet::validate(cfg);
      if (print) std::cout << lrtnet::config_to_json(cfg).dump(2) << '\n';
      if (violations.empty()) {
        std::cout << "ok\n";
        return lrtnet::kExitOk;
      }
      for (const auto& v : violations) std::cerr << v.field << ": " << v.message << '\n';
      return lrtnet::kExitConfig;
    }

    if (*oracle) {
      const RunConfig cfg = resolve(oracle_src);
      if (cfg.experiment != lrtnet::Experiment::synthetic) {
        std::cerr << "oracle needs a synthetic experiment (known densities)\n";
        return lrtnet::kExitConfig;
      }
      const auto& pair = cfg.synthetic.pair;
      pair.validate();
      nlohmann::json out;
      if (pair.f1.dim() == 1) {
        const auto q = lrtnet::lrt_errors_quadrature(pair);
        out["quadrature"] = {{"err1", q.err1}, {"err2", q.err2}, {"avg", q.avg}, {"weighted", q.weighted}};
        if (q.coverage_warning) std::cerr << "warning: scan interval misses more than 1e-8 of a density\n";
        out["criterion_upper_bound"] = lrtnet::criterion_upper_bound(pair);
      }
      const auto mc = lrtnet::lrt_errors_montecarlo(pair, mc_samples, cfg.seed);
      out["montecarlo"] = {{"n_per_class", mc_samples}, {"err1", mc.err1}, {"err2", mc.err2}, {"avg", mc.avg}};
      std::cout << out.dump(2) << '\n';
      return lrtnet::kExitOk;
    }

    for (const auto& name : lrtnet::preset_names()) std::cout << name << '\n';
    return lrtnet::kExitOk;
  } catch (const ConfigError& e) {
    return report_config_error(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return lrtnet::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lrtnet::kExitFailure;
  }
}
