#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "homsim/pipeline.hpp"
#include "homsim/presets.hpp"

using namespace homsim;

TEST_CASE("autocorrelation presets recover their calibrated dip widths") {
  // stream -> correlate -> fit recovers the antibunching dip the preset was
  // calibrated for (7.5 ns / 9.5 ns)
  struct Case {
    const char* preset;
    double fwhm_ns;
  };
  for (const Case c : {Case{"paper-fig3a", 7.5}, Case{"paper-fig3b", 9.5}}) {
    CAPTURE(c.preset);
    auto cfg = presets::get(c.preset);
    const auto r = pipeline::run_autocorr_scenario(cfg, 5000.0, *cfg.seed);
    CHECK(r.fit.converged);
    CHECK(std::abs(r.dip_fwhm * 1e9 - c.fwhm_ns) < 0.8);
    CHECK(r.fit.param("a") > 0.1);  // bunching shoulder present
  }
}

TEST_CASE("hom pipeline writes its artifact set") {
  auto cfg = presets::get("paper-fig3d");
  pipeline::RunOptions opts;
  opts.duration_override = 3000.0;
  opts.output_dir_override = (std::filesystem::temp_directory_path() / "homsim_pipe_test").string();
  const auto outcome = pipeline::run(cfg, opts);
  CHECK(outcome.summary.find("g2_par(0)=") == 0);
  const std::filesystem::path dir(*opts.output_dir_override);
  for (const char* name : {"config_resolved.json", "results.json", "g2.csv", "g2_rebinned.csv",
                           "g2.json", "fit.json", "g2.svg"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(dir / name));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("identical runs produce byte-identical artifacts") {
  auto cfg = presets::get("paper-fig3a");
  pipeline::RunOptions opts;
  opts.duration_override = 300.0;
  auto tmp = std::filesystem::temp_directory_path();
  opts.output_dir_override = (tmp / "homsim_repro_a").string();
  pipeline::run(cfg, opts);
  opts.output_dir_override = (tmp / "homsim_repro_b").string();
  pipeline::run(cfg, opts);
  for (const char* name : {"g2.csv", "results.json", "fit.json", "g2.svg"}) {
    CAPTURE(name);
    std::ifstream a(tmp / "homsim_repro_a" / name, std::ios::binary);
    std::ifstream b(tmp / "homsim_repro_b" / name, std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
  }
  std::filesystem::remove_all(tmp / "homsim_repro_a");
  std::filesystem::remove_all(tmp / "homsim_repro_b");
}
