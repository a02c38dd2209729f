#include "homsim/pipeline.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "homsim/io.hpp"
#include "homsim/model.hpp"
#include "homsim/presets.hpp"
#include "homsim/svg.hpp"
#include "json.hpp"

namespace homsim::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// cheap content hash so exported fits record which fixed settings made them
std::string settings_hash(const fitting::G2Fixed& fx) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h = hash_key(h, bits);
  };
  mix(fx.dilution);
  mix(fx.gamma_bar);
  mix(fx.env_fwhm_sum);
  mix(fx.delta_f0);
  mix(fx.fixed_xi ? *fx.fixed_xi : -1.0);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// Squared signal fraction entering the fit as the dip dilution: configured
// noise rates against measured totals, per detector.
double dilution_from_rates(const config::RunConfig& cfg, const mc::HomRunStats& stats,
                           double duration) {
  const double noise_c = cfg.detector_c.dark_rate + cfg.detector_c.background_rate;
  const double noise_d = cfg.detector_d.dark_rate + cfg.detector_d.background_rate;
  const double rate_c = static_cast<double>(stats.clicks_c) / duration;
  const double rate_d = static_cast<double>(stats.clicks_d) / duration;
  require(rate_c > noise_c && rate_d > noise_d, "measured rates below configured noise rates");
  return (1.0 - noise_c / rate_c) * (1.0 - noise_d / rate_d);
}

double fitted_dip_fwhm(const std::function<double(double)>& curve) {
  std::vector<double> tau, g;
  tau.reserve(3125);
  for (std::int64_t k = -1562; k <= 1562; ++k) {
    tau.push_back(static_cast<double>(k) * 64e-12);
    g.push_back(curve(tau.back()));
  }
  return model::dip_fwhm(tau, g, 30e-9, 60e-9);
}

svg::Series data_series(const tcspc::CorrelationHistogram& h, const std::string& label) {
  svg::Series s;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (std::abs(h.bin_centers[i]) > 100e-9) continue;
    s.x.push_back(h.bin_centers[i] * 1e9);
    s.y.push_back(h.g2[i]);
    s.yerr.push_back(std::isfinite(h.g2_err[i]) ? h.g2_err[i] : 0.0);
  }
  s.label = label;
  s.color = "#444444";
  return s;
}

svg::Series curve_series(const std::function<double(double)>& curve, const std::string& label,
                         const std::string& color) {
  svg::Series s;
  for (double t = -100e-9; t <= 100.001e-9; t += 0.25e-9) {
    s.x.push_back(t * 1e9);
    s.y.push_back(curve(t));
  }
  s.as_line = true;
  s.label = label;
  s.color = color;
  return s;
}

}  // namespace

HomScenarioResult run_hom_scenario(const config::RunConfig& cfg, double duration,
                                   std::uint64_t seed, std::vector<Click>* collect) {
  HomScenarioResult out;
  const mc::HomConfig hom = cfg.hom_config();
  tcspc::StreamingCorrelator corr(cfg.correlator);
  out.stats = mc::run_hom(hom, duration, seed, [&](std::span<const Click> chunk) {
    corr.push_merged(chunk);
    if (collect) collect->insert(collect->end(), chunk.begin(), chunk.end());
  });
  out.histogram = tcspc::normalize(corr.finish(duration));
  out.rebinned = (cfg.fit_rebin > 1) ? tcspc::rebin(out.histogram, cfg.fit_rebin)
                                     : out.histogram;

  out.dilution = dilution_from_rates(cfg, out.stats, duration);
  out.fixed.dilution = out.dilution;
  out.fixed.gamma_bar = 0.5 * (cfg.emitters[0].gamma + cfg.emitters[1].gamma);
  out.fixed.env_fwhm_sum = cfg.emitters[0].sd_fwhm + cfg.emitters[1].sd_fwhm;
  out.fixed.delta_f0 = cfg.delta_f0;

  const bool perpendicular = cfg.polarization == mc::Polarization::kPerpendicular;
  fitting::G2Fixed reporting = out.fixed;
  if (perpendicular) reporting.fixed_xi = 0.0;
  out.fit = fitting::fit_g2(out.rebinned, fitting::G2Model::kCross, reporting);
  if (perpendicular) {
    out.fit_free_xi = fitting::fit_g2(out.rebinned, fitting::G2Model::kCross, out.fixed);
  }
  out.fixed = reporting;

  out.g2_zero = fitting::g2_cross_fit_curve(out.fit, reporting, 0.0);
  const double b = out.fit.param("baseline");
  const double sb = out.fit.sigma("baseline");
  double var = (out.g2_zero / b) * (out.g2_zero / b) * sb * sb;
  if (!perpendicular) {
    const double dxi = 0.5 * b * out.dilution * out.fit.sigma("xi");
    var += dxi * dxi;
  }
  out.g2_zero_sigma = std::sqrt(var);
  out.dip_fwhm = fitted_dip_fwhm(
      [&](double t) { return fitting::g2_cross_fit_curve(out.fit, reporting, t); });
  return out;
}

AutocorrScenarioResult run_autocorr_scenario(const config::RunConfig& cfg, double duration,
                                             std::uint64_t seed, std::vector<Click>* collect) {
  AutocorrScenarioResult out;
  // HBT: one emitter split on the beamsplitter; the second source is off.
  mc::HomConfig hom;
  const EmitterModel& em = cfg.emitters[static_cast<std::size_t>(cfg.autocorr_emitter - 1)];
  hom.pair.emitter1 = em;
  hom.pair.emitter2 = em;
  hom.pair.emitter2.f_ex = em.f_ex - 1e9;  // unused; keep delta_f0 consistency happy
  hom.pair.emitter2.f_ey = em.f_ey - 1e9;
  hom.pair.delta_f0 = 1e9;
  hom.pair.xi = 0.0;
  hom.enable_emitter2 = false;
  const auto dyn = cfg.resolved_dynamics();
  hom.dynamics1 = dyn[static_cast<std::size_t>(cfg.autocorr_emitter - 1)];
  hom.dynamics2 = hom.dynamics1;
  hom.detector_c = cfg.detector_c;
  hom.detector_d = cfg.detector_d;
  if (cfg.dynamics.from_autocorr) {
    const double eff =
        cfg.dynamics.target_rate_cps /
        kinetics::analyze(hom.dynamics1).emission_rate;
    hom.detector_c.efficiency = eff;
    hom.detector_d.efficiency = eff;
  }

  tcspc::StreamingCorrelator corr(cfg.correlator);
  out.stats = mc::run_hom(hom, duration, seed, [&](std::span<const Click> chunk) {
    corr.push_merged(chunk);
    if (collect) collect->insert(collect->end(), chunk.begin(), chunk.end());
  });
  out.histogram = tcspc::normalize(corr.finish(duration));
  out.rebinned = (cfg.fit_rebin > 1) ? tcspc::rebin(out.histogram, cfg.fit_rebin)
                                     : out.histogram;
  out.dilution = dilution_from_rates(cfg, out.stats, duration);

  fitting::G2Fixed fixed;
  fixed.dilution = out.dilution;
  out.fit = fitting::fit_g2(out.rebinned, fitting::G2Model::kAuto, fixed);
  out.dip_fwhm = fitted_dip_fwhm(
      [&](double t) { return fitting::g2_auto_fit_curve(out.fit, out.dilution, t); });
  return out;
}

PleScenarioResult run_ple_scenario(const config::RunConfig& cfg, std::uint64_t seed) {
  PleScenarioResult out;
  require(!cfg.emitters.empty(), "ple scenario needs an emitter");
  const auto grid = cfg.ple.grid();
  out.spectrum = mc::simulate_ple(cfg.emitters[0], grid, cfg.ple.init_pulse, cfg.ple.dwell,
                                  cfg.ple.peak_rate, cfg.ple.background_rate, seed);
  out.fit = fitting::fit_lorentzian(out.spectrum);
  return out;
}

TuningScanResult run_tuning_scenario(const config::RunConfig& cfg, std::uint64_t seed) {
  TuningScanResult out;
  const auto& t = cfg.tuning;
  std::vector<double> voltages;
  for (double v = t.v_start; v <= t.v_stop + 1e-9; v += t.v_step) voltages.push_back(v);

  stark::TuningScanConfig scfg;
  scfg.response = t.response;
  scfg.tunable_base = t.tunable_base;
  scfg.fixed_line = t.fixed_line;
  scfg.tunable_fwhm = t.tunable_fwhm;
  scfg.fixed_fwhm = t.fixed_fwhm;
  scfg.peak_rate = cfg.ple.peak_rate;
  scfg.background_rate = cfg.ple.background_rate;
  scfg.dwell = cfg.ple.dwell;
  scfg.init_pulse = cfg.ple.init_pulse;
  scfg.grid = cfg.ple.grid();
  scfg.display_offset_step = t.display_offset_step;
  out.scan = stark::simulate_tuning_scan(scfg, voltages, seed);

  out.tune = stark::tune_to_resonance(t.response, t.tunable_base, t.fixed_line, stark::Line::kEx);

  double prev = 0.0;
  bool first = true;
  for (double v : voltages) {
    const auto lp = stark::transition_freqs(t.response, t.tunable_base, v);
    const double det = lp.f_ex - t.fixed_line;
    if (!first && det * prev < 0.0) ++out.crossings;
    if (det != 0.0) {
      prev = det;
      first = false;
    }
  }
  return out;
}

namespace {

json hom_result_json(const HomScenarioResult& r, const config::RunConfig& cfg) {
  json j;
  const bool perp = cfg.polarization == mc::Polarization::kPerpendicular;
  j[perp ? "g2_perp_0" : "g2_par_0"] = r.g2_zero;
  j[perp ? "g2_perp_0_sigma" : "g2_par_0_sigma"] = r.g2_zero_sigma;
  j["dip_fwhm_ns"] = r.dip_fwhm * 1e9;
  j["dilution"] = r.dilution;
  j["rate_c_cps"] = r.histogram.rate_c;
  j["rate_d_cps"] = r.histogram.rate_d;
  j["pairs"] = r.stats.pairs;
  j["fit"] = json::parse(io::fit_result_json(r.fit, settings_hash(r.fixed)));
  if (r.fit_free_xi) {
    j["free_xi_check"] = {{"xi", r.fit_free_xi->param("xi")},
                          {"xi_sigma", r.fit_free_xi->sigma("xi")}};
  }
  return j;
}

}  // namespace

RunOutcome run(const config::RunConfig& cfg_in, const RunOptions& opts) {
  config::RunConfig cfg = cfg_in;
  if (opts.duration_override) cfg.duration = *opts.duration_override;
  if (opts.seed_override) cfg.seed = *opts.seed_override;
  if (opts.output_dir_override) cfg.output_dir = *opts.output_dir_override;
  cfg.validate();

  const fs::path out_dir(cfg.output_dir);
  if (opts.write_files) {
    fs::create_directories(out_dir);
    std::ofstream f(out_dir / "config_resolved.json");
    f << config::serialize(cfg);
  }

  RunOutcome outcome;
  json results;
  const std::uint64_t seed = cfg.seed.value_or(0);

  switch (cfg.scenario) {
    case config::Scenario::kHom: {
      std::vector<Click> clicks;
      auto r = run_hom_scenario(cfg, cfg.duration, seed,
                                opts.dump_clicks ? &clicks : nullptr);
      const bool perp = cfg.polarization == mc::Polarization::kPerpendicular;
      results = hom_result_json(r, cfg);
      if (opts.write_files && opts.dump_clicks) {
        ClickStream stream{std::move(clicks), cfg.duration, seed};
        io::write_clicks_csv(out_dir / "clicks.csv", stream);
      }
      if (opts.write_files) {
        io::write_histogram_csv(out_dir / "g2.csv", r.histogram);
        io::write_histogram_csv(out_dir / "g2_rebinned.csv", r.rebinned);
        io::write_histogram_json(out_dir / "g2.json", r.histogram, seed, "hom");
        io::write_fit_json(out_dir / "fit.json", r.fit, settings_hash(r.fixed));
        svg::Figure fig;
        fig.title = perp ? "cross-correlation, perpendicular" : "cross-correlation, parallel";
        fig.x_label = "tau (ns)";
        fig.y_label = "g2";
        fig.series.push_back(data_series(r.rebinned, "data"));
        auto fixed = r.fixed;
        auto fitc = r.fit;
        fig.series.push_back(curve_series(
            [&](double t) { return fitting::g2_cross_fit_curve(fitc, fixed, t); }, "fit",
            "#d62728"));
        svg::write_svg(out_dir / "g2.svg", fig);
      }
      outcome.summary = std::string(perp ? "g2_perp(0)=" : "g2_par(0)=") + fmt(r.g2_zero, 3) +
                        "+-" + fmt(r.g2_zero_sigma, 2) + " dip_fwhm=" + fmt(r.dip_fwhm * 1e9, 3) +
                        " ns";
      break;
    }
    case config::Scenario::kAutocorr: {
      std::vector<Click> clicks;
      auto r = run_autocorr_scenario(cfg, cfg.duration, seed,
                                     opts.dump_clicks ? &clicks : nullptr);
      if (opts.write_files && opts.dump_clicks) {
        ClickStream stream{std::move(clicks), cfg.duration, seed};
        io::write_clicks_csv(out_dir / "clicks.csv", stream);
      }
      results["dip_fwhm_ns"] = r.dip_fwhm * 1e9;
      results["fit"] = json::parse(io::fit_result_json(r.fit, ""));
      results["dilution"] = r.dilution;
      if (opts.write_files) {
        io::write_histogram_csv(out_dir / "g2.csv", r.histogram);
        io::write_histogram_json(out_dir / "g2.json", r.histogram, seed, "autocorr");
        io::write_fit_json(out_dir / "fit.json", r.fit, "");
        svg::Figure fig;
        fig.title = "single-emitter autocorrelation";
        fig.x_label = "tau (ns)";
        fig.y_label = "g2";
        fig.series.push_back(data_series(r.rebinned, "data"));
        auto fitc = r.fit;
        const double q = r.dilution;
        fig.series.push_back(curve_series(
            [&](double t) { return fitting::g2_auto_fit_curve(fitc, q, t); }, "fit", "#d62728"));
        svg::write_svg(out_dir / "g2.svg", fig);
      }
      outcome.summary = "dip_fwhm=" + fmt(r.dip_fwhm * 1e9, 3) +
                        " ns tau1=" + fmt(r.fit.param("tau1") * 1e9, 3) +
                        " ns a=" + fmt(r.fit.param("a"), 3);
      break;
    }
    case config::Scenario::kPle: {
      auto r = run_ple_scenario(cfg, seed);
      results["center_mhz"] = r.fit.param("center") / 1e6;
      results["center_sigma_mhz"] = r.fit.sigma("center") / 1e6;
      results["fwhm_mhz"] = r.fit.param("fwhm") / 1e6;
      results["fwhm_sigma_mhz"] = r.fit.sigma("fwhm") / 1e6;
      results["fit"] = json::parse(io::fit_result_json(r.fit, ""));
      if (opts.write_files) {
        io::write_spectrum_csv(out_dir / "spectrum.csv", r.spectrum);
        io::write_fit_json(out_dir / "spectrum_fit.json", r.fit, "");
        svg::Figure fig;
        fig.title = "PLE spectrum";
        fig.x_label = "detuning (MHz)";
        fig.y_label = "rate (counts/s)";
        svg::Series data;
        for (std::size_t i = 0; i < r.spectrum.freq.size(); ++i) {
          data.x.push_back(r.spectrum.freq[i] / 1e6);
          data.y.push_back(static_cast<double>(r.spectrum.counts[i]) / r.spectrum.dwell);
          data.yerr.push_back(std::sqrt(std::max(1.0, double(r.spectrum.counts[i]))) /
                              r.spectrum.dwell);
        }
        data.label = "data";
        data.color = "#444444";
        fig.series.push_back(data);
        auto fitc = r.fit;
        svg::Series curve;
        curve.as_line = true;
        curve.color = "#d62728";
        curve.label = "fit";
        for (double f = r.spectrum.freq.front(); f <= r.spectrum.freq.back();
             f += (r.spectrum.freq.back() - r.spectrum.freq.front()) / 800.0) {
          curve.x.push_back(f / 1e6);
          const double hw = 0.5 * fitc.param("fwhm");
          const double x = f - fitc.param("center");
          curve.y.push_back(fitc.param("offset") +
                            fitc.param("amplitude") * hw * hw / (x * x + hw * hw));
        }
        fig.series.push_back(curve);
        svg::write_svg(out_dir / "ple.svg", fig);
      }
      outcome.summary = "center=" + fmt(r.fit.param("center") / 1e6, 4) + " MHz fwhm=" +
                        fmt(r.fit.param("fwhm") / 1e6, 3) + "+-" +
                        fmt(r.fit.sigma("fwhm") / 1e6, 2) + " MHz";
      break;
    }
    case config::Scenario::kTuningScan: {
      auto r = run_tuning_scenario(cfg, seed);
      results["v_opt"] = r.tune.v_opt;
      results["residual_detuning_mhz"] = r.tune.residual_detuning / 1e6;
      results["clipped"] = r.tune.clipped;
      results["crossings"] = r.crossings;
      if (opts.write_files) {
        json index;
        index["voltages"] = json::array();
        for (std::size_t i = 0; i < r.scan.size(); ++i) {
          const auto& pt = r.scan[i];
          std::ostringstream name;
          name << "scan_" << i << ".csv";
          io::write_spectrum_csv(out_dir / name.str(), pt.spectrum);
          index["voltages"].push_back({{"voltage", pt.voltage},
                                       {"file", name.str()},
                                       {"display_offset_cps", pt.display_offset_rate}});
        }
        std::ofstream f(out_dir / "scan_index.json");
        f << index.dump(2) << '\n';
        svg::Figure fig;
        fig.title = "transition frequency vs gate voltage";
        fig.x_label = "voltage (V)";
        fig.y_label = "detuning (MHz)";
        svg::Series tun, fixed_line;
        for (const auto& pt : r.scan) {
          const auto lp =
              stark::transition_freqs(cfg.tuning.response, cfg.tuning.tunable_base, pt.voltage);
          tun.x.push_back(pt.voltage);
          tun.y.push_back(lp.f_ex / 1e6);
          fixed_line.x.push_back(pt.voltage);
          fixed_line.y.push_back(cfg.tuning.fixed_line / 1e6);
        }
        tun.as_line = true;
        tun.label = "tunable Ex";
        fixed_line.as_line = true;
        fixed_line.color = "#d62728";
        fixed_line.label = "reference";
        fig.series.push_back(tun);
        fig.series.push_back(fixed_line);
        svg::write_svg(out_dir / "tuning.svg", fig);
      }
      outcome.summary = "V_opt=" + fmt(r.tune.v_opt, 3) + " V residual=" +
                        fmt(r.tune.residual_detuning / 1e6, 3) + " MHz";
      break;
    }
    case config::Scenario::kBudget: {
      const auto& bs = cfg.budget_settings;
      const double total = budget::compose(bs.budget);
      const double bg = budget::background_contribution(bs.signal_total, bs.noise_total);
      const double imp_ledger =
          budget::spectral_impurity_contribution(bs.purity, budget::ImpurityMode::kPaperLedger);
      const double imp_model =
          budget::spectral_impurity_contribution(bs.purity, budget::ImpurityMode::kModel);
      const auto vis = budget::visibility(bs.g2_perp, bs.g2_par);
      results["total"] = total;
      results["exceeds_distinguishable_bound"] = budget::exceeds_distinguishable_bound(bs.budget);
      results["background_contribution"] = bg;
      results["impurity_ledger"] = imp_ledger;
      results["impurity_model"] = imp_model;
      results["visibility"] = vis.value;
      results["visibility_sigma"] = vis.sigma;
      for (const auto& c : bs.budget.contributions) {
        results["contributions"][c.label] = c.delta_g2;
      }
      if (opts.write_files) {
        std::ofstream f(out_dir / "budget.txt");
        f << "g2(0) noise budget\n";
        f << "  baseline                      " << io::format_double(bs.budget.baseline) << "\n";
        for (const auto& c : bs.budget.contributions) {
          f << "  + " << c.label;
          for (std::size_t k = c.label.size(); k < 28; ++k) f << ' ';
          f << io::format_double(c.delta_g2) << "\n";
        }
        f << "  = expected g2_par(0)          " << io::format_double(total) << "\n\n";
        f << "derived quantities\n";
        f << "  background " << io::format_double(bs.noise_total) << "/"
          << io::format_double(bs.signal_total) << " counts/s -> delta "
          << io::format_double(bg) << "\n";
        f << "  impurity at purity " << io::format_double(bs.purity) << ": ledger "
          << io::format_double(imp_ledger) << ", model 1-p^2 " << io::format_double(imp_model)
          << "\n";
        f << "  visibility eta = " << io::format_double(vis.value) << " +- "
          << io::format_double(vis.sigma) << "\n";
      }
      outcome.summary = "budget total=" + fmt(total, 3) + " visibility=" + fmt(vis.value, 3) +
                        "+-" + fmt(vis.sigma, 2);
      break;
    }
    case config::Scenario::kRate: {
      const auto t = budget::entanglement_time(cfg.rate);
      results["entanglement_time_s"] = t.seconds;
      results["finite"] = t.finite;
      outcome.summary = "entanglement_time=" + fmt(t.seconds, 4) + " s";
      break;
    }
  }

  outcome.results_json = results.dump(2) + "\n";
  if (opts.write_files) {
    std::ofstream f(out_dir / "results.json");
    f << outcome.results_json;
  }
  return outcome;
}

}  // namespace homsim::pipeline
