// smatruss: run the SMA truss control scenarios and check the error bounds.
//
//   smatruss run fuzzy-fl --out results/
//   smatruss run fl --set lambda=0.3 --set duration=500
//   smatruss run uncontrolled fl fuzzy-fl --out results/   (concurrent batch)
//   smatruss run fuzzy-fl --dump-config > my.cfg
//   smatruss run --config my.cfg --out results/
//   smatruss verify results/fuzzy-fl

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "smatruss/config.hpp"
#include "smatruss/io.hpp"
#include "smatruss/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;

namespace fs = std::filesystem;
using smatruss::config::ConfigError;
using smatruss::config::RunConfig;

struct RunOptions {
  std::vector<std::string> presets;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  bool dump_config = false;
};

RunConfig resolve(const std::string& preset_name, const RunOptions& opt) {
  RunConfig cfg = smatruss::config::preset(preset_name.empty() ? "fuzzy-fl" : preset_name);
  if (!opt.config_path.empty()) cfg = smatruss::config::load(opt.config_path, cfg);
  for (const auto& o : opt.overrides) smatruss::config::apply_override(cfg, o);
  return cfg;
}

void print_summary(const std::string& label, const smatruss::ScenarioResult& r) {
  const auto& m = r.metrics;
  std::cout << label << ": rms_error=" << smatruss::io::format_number(m.rms_error)
            << " max_abs_error=" << smatruss::io::format_number(m.max_abs_error)
            << " snap_through_count=" << m.snap_through_count
            << " inside_box=" << (m.bounds.inside ? "true" : "false") << '\n';
}

int cmd_run(const RunOptions& opt) {
  std::vector<std::string> names = opt.presets;
  if (names.empty()) names.push_back("");

  std::vector<RunConfig> configs;
  std::vector<smatruss::Scenario> scenarios;
  try {
    for (const auto& name : names) {
      configs.push_back(resolve(name, opt));
      scenarios.push_back(smatruss::config::to_scenario(configs.back()));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (opt.dump_config) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      if (i > 0) std::cout << '\n';
      smatruss::config::dump(std::cout, configs[i]);
    }
    return kExitOk;
  }

  const auto outcomes = smatruss::run_scenarios(scenarios);
  int status = kExitOk;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& label = configs[i].preset;
    const auto& outcome = outcomes[i];
    if (!outcome.result) {
      std::cerr << label << ": " << outcome.error << '\n';
      status = std::max(status, outcome.blew_up ? kExitBlowUp : kExitFailure);
      continue;
    }
    const fs::path dir = configs.size() > 1 ? fs::path(opt.out_dir) / label : fs::path(opt.out_dir);
    try {
      smatruss::io::write_run(dir, scenarios[i], *outcome.result, label);
    } catch (const std::exception& e) {
      std::cerr << label << ": " << e.what() << '\n';
      status = std::max(status, kExitFailure);
      continue;
    }
    print_summary(label, *outcome.result);
  }
  return status;
}

struct VerifyOptions {
  std::string dir;
  double lambda = 0.0;
  double transient_fraction = -1.0;
};

int cmd_verify(const VerifyOptions& opt) {
  const fs::path dir(opt.dir);
  smatruss::io::KeyValues meta;
  if (std::ifstream mf(dir / "metrics.txt"); mf) meta = smatruss::io::read_key_values(mf);

  try {
    const auto pick = [&](double flag, bool flag_set, const char* key, double fallback) {
      if (flag_set) return flag;
      if (const auto it = meta.find(key); it != meta.end()) return smatruss::io::parse_number(it->second);
      return fallback;
    };
    const double lambda = pick(opt.lambda, opt.lambda > 0.0, "lambda", 0.6);
    const double fraction = pick(opt.transient_fraction, opt.transient_fraction >= 0.0, "transient_fraction", 0.5);
    if (const auto it = meta.find("order"); it != meta.end() && it->second != "2") {
      std::cerr << "verify: only second-order runs are supported\n";
      return kExitConfig;
    }

    std::ifstream ts(dir / "timeseries.csv");
    if (!ts) {
      std::cerr << "verify: cannot open " << (dir / "timeseries.csv").string() << '\n';
      return kExitConfig;
    }
    const auto series = smatruss::io::read_timeseries(ts);
    if (series.size() == 0) {
      std::cerr << "verify: empty time series\n";
      return kExitConfig;
    }
    const auto report = smatruss::verify_bounds(series, lambda, fraction);
    smatruss::io::write_key_values(std::cout, smatruss::io::bounds_entries(report, lambda, fraction));
  } catch (const smatruss::io::FormatError& e) {
    std::cerr << "verify: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shape-memory two-bar truss: chaos and fuzzy feedback-linearization control"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one or more presets and write CSV/metrics artifacts");
  run_cmd->add_option("preset", run.presets, "uncontrolled | fl | fuzzy-fl (several run concurrently)");
  run_cmd->add_option("--config", run.config_path, "Config file applied on top of the preset")->check(CLI::ExistingFile);
  run_cmd->add_option("--set", run.overrides, "Override one key, key=value (repeatable)")->allow_extra_args(false);
  run_cmd->add_option("--out", run.out_dir, "Output directory");
  run_cmd->add_flag("--dump-config", run.dump_config, "Print the resolved configuration and exit");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a controlled run against its convergence box");
  verify_cmd->add_option("dir", verify.dir, "Directory holding timeseries.csv and metrics.txt")->required();
  verify_cmd->add_option("--lambda", verify.lambda, "Bandwidth used for the box (default: from metrics.txt)");
  verify_cmd->add_option("--transient-fraction", verify.transient_fraction,
                         "Leading fraction of the run to ignore (default: from metrics.txt)");

  app.add_subcommand("presets", "List the built-in presets")->callback([] {
    for (const auto& name : smatruss::config::preset_names()) std::cout << name << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run_cmd) return cmd_run(run);
  if (*verify_cmd) return cmd_verify(verify);
  return kExitOk;
}
