// Command-line front end: run experiment scenarios from a config file or a
// built-in preset, validate configs, and correlate stored click streams.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime/validity error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "homsim/config.hpp"
#include "homsim/correlator.hpp"
#include "homsim/io.hpp"
#include "homsim/pipeline.hpp"
#include "homsim/presets.hpp"
#include "homsim/types.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& preset,
                std::optional<double> duration, std::optional<std::uint64_t> seed,
                std::optional<std::string> out_dir, bool dump_clicks) {
  homsim::config::RunConfig cfg;
  try {
    if (!preset.empty()) {
      cfg = homsim::presets::get(preset);
    } else if (!config_path.empty()) {
      cfg = homsim::config::load(config_path);
    } else {
      std::cerr << "run: provide a config file or --preset\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  homsim::pipeline::RunOptions opts;
  opts.duration_override = duration;
  opts.seed_override = seed;
  opts.output_dir_override = out_dir;
  opts.dump_clicks = dump_clicks;

  try {
    const auto outcome = homsim::pipeline::run(cfg, opts);
    std::cout << outcome.summary << "\n";
    return 0;
  } catch (const homsim::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

int presets_command() {
  for (const auto& p : homsim::presets::list()) {
    std::printf("%-14s %s\n", p.name.c_str(), p.description.c_str());
  }
  return 0;
}

int validate_command(const std::string& config_path) {
  try {
    const auto cfg = homsim::config::load(config_path);
    std::cout << "ok: scenario " << homsim::config::to_string(cfg.scenario) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

int correlate_command(const std::string& clicks_path, double bin_ps, double window_ns,
                      const std::string& normalization, const std::string& out_dir) {
  try {
    homsim::tcspc::CorrelatorConfig ccfg;
    ccfg.bin_width = bin_ps * 1e-12;
    ccfg.window = window_ns * 1e-9;
    if (normalization == "rate-product") {
      ccfg.normalization = homsim::tcspc::Normalization::kRateProduct;
    } else if (normalization == "tail-average") {
      ccfg.normalization = homsim::tcspc::Normalization::kTailAverage;
    } else {
      std::cerr << "config error: unknown normalization '" << normalization << "'\n";
      return 2;
    }
    ccfg.validate();

    const auto stream = homsim::io::read_clicks(clicks_path);
    auto hist = homsim::tcspc::normalize(homsim::tcspc::correlate(stream, ccfg));
    std::filesystem::create_directories(out_dir);
    homsim::io::write_histogram_csv(std::filesystem::path(out_dir) / "g2.csv", hist);
    homsim::io::write_histogram_json(std::filesystem::path(out_dir) / "g2.json", hist,
                                     stream.seed, "correlate");
    std::cout << "clicks C=" << stream.count(homsim::Detector::C)
              << " D=" << stream.count(homsim::Detector::D)
              << " total_pairs=" << hist.total_counts() << "\n";
    return 0;
  } catch (const homsim::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-emitter photon interference simulator and analysis toolkit"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a scenario from a config file or preset");
  std::string config_path, preset;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool dump_clicks = false;
  run_cmd->add_option("config", config_path, "config JSON file");
  run_cmd->add_option("--preset", preset, "built-in preset name");
  run_cmd->add_option("--duration", duration, "override simulated duration (s)");
  run_cmd->add_option("--seed", seed, "override random seed");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--dump-clicks", dump_clicks, "also write the raw click stream (CSV)");

  auto* presets_cmd = app.add_subcommand("presets", "list built-in presets");

  auto* validate_cmd = app.add_subcommand("validate", "validate a config file");
  std::string validate_path;
  validate_cmd->add_option("config", validate_path, "config JSON file")->required();

  auto* corr_cmd = app.add_subcommand("correlate", "histogram a stored click stream");
  std::string clicks_path, norm = "rate-product", corr_out = "out";
  double bin_ps = 64.0, window_ns = 100.0;
  corr_cmd->add_option("clicks", clicks_path, "click stream file (.csv or .bin)")->required();
  corr_cmd->add_option("--bin-ps", bin_ps, "bin width (ps)");
  corr_cmd->add_option("--window-ns", window_ns, "max |tau| (ns)");
  corr_cmd->add_option("--normalization", norm, "rate-product | tail-average");
  corr_cmd->add_option("--out", corr_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) {
    return run_command(config_path, preset, duration, seed, out_dir, dump_clicks);
  }
  if (presets_cmd->parsed()) return presets_command();
  if (validate_cmd->parsed()) return validate_command(validate_path);
  if (corr_cmd->parsed()) {
    return correlate_command(clicks_path, bin_ps, window_ns, norm, corr_out);
  }
  return 0;
}
