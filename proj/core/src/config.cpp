#include "homsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace homsim::config {

using nlohmann::json;

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::kHom: return "hom";
    case Scenario::kAutocorr: return "autocorr";
    case Scenario::kPle: return "ple";
    case Scenario::kTuningScan: return "tuning-scan";
    case Scenario::kBudget: return "budget";
    case Scenario::kRate: return "rate";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "hom") return Scenario::kHom;
  if (s == "autocorr") return Scenario::kAutocorr;
  if (s == "ple") return Scenario::kPle;
  if (s == "tuning-scan") return Scenario::kTuningScan;
  if (s == "budget") return Scenario::kBudget;
  if (s == "rate") return Scenario::kRate;
  throw DomainError("unknown scenario '" + s + "'");
}

std::vector<double> PleSettings::grid() const {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] =
        center - 0.5 * span + span * static_cast<double>(i) / (points - 1);
  }
  return g;
}

namespace {

double get_num(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw DomainError("missing field " + ctx + "." + key);
  if (!j[key].is_number()) throw DomainError("field " + ctx + "." + key + " must be a number");
  return j[key].get<double>();
}

double get_num_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  return j[key].get<double>();
}

EmitterModel parse_emitter(const json& j, const std::string& ctx) {
  EmitterModel em;
  em.f_ex = get_num_or(j, "f_ex_mhz", 0.0) * 1e6;
  em.f_ey = get_num_or(j, "f_ey_mhz", hz_to_mhz(em.f_ex) - 3000.0) * 1e6;
  em.gamma = 1.0 / ns_to_s(get_num_or(j, "lifetime_ns", 12.0));
  em.sd_fwhm = get_num_or(j, "linewidth_mhz", 0.0) * 1e6;
  em.spin_purity = get_num_or(j, "spin_purity", 1.0);
  if (j.contains("autocorr")) {
    const auto& a = j["autocorr"];
    em.autocorr.a = get_num_or(a, "a", 0.0);
    em.autocorr.tau1 = ns_to_s(get_num(a, "tau1_ns", ctx + ".autocorr"));
    em.autocorr.tau2 = ns_to_s(get_num(a, "tau2_ns", ctx + ".autocorr"));
  }
  return em;
}

json emitter_json(const EmitterModel& em) {
  json j;
  j["f_ex_mhz"] = em.f_ex / 1e6;
  j["f_ey_mhz"] = em.f_ey / 1e6;
  j["lifetime_ns"] = s_to_ns(1.0 / em.gamma);
  j["linewidth_mhz"] = em.sd_fwhm / 1e6;
  j["spin_purity"] = em.spin_purity;
  j["autocorr"] = {{"a", em.autocorr.a},
                   {"tau1_ns", s_to_ns(em.autocorr.tau1)},
                   {"tau2_ns", s_to_ns(em.autocorr.tau2)}};
  return j;
}

DetectorModel parse_detector(const json& j) {
  DetectorModel d;
  if (j.contains("efficiency")) d.efficiency = j["efficiency"].get<double>();
  d.dark_rate = get_num_or(j, "dark_cps", 0.0);
  d.background_rate = get_num_or(j, "background_cps", 0.0);
  d.jitter_sigma = get_num_or(j, "jitter_ps", 50.0) * 1e-12;
  d.dead_time = ns_to_s(get_num_or(j, "dead_time_ns", 50.0));
  return d;
}

json detector_json(const DetectorModel& d) {
  json j;
  j["efficiency"] = d.efficiency;
  j["dark_cps"] = d.dark_rate;
  j["background_cps"] = d.background_rate;
  j["jitter_ps"] = d.jitter_sigma * 1e12;
  j["dead_time_ns"] = s_to_ns(d.dead_time);
  return j;
}

}  // namespace

RunConfig parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  if (!j.contains("scenario")) throw DomainError("missing field scenario");
  cfg.scenario = scenario_from_string(j["scenario"].get<std::string>());
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  cfg.duration = get_num_or(j, "duration_s", 0.0);
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();

  if (j.contains("emitters")) {
    int idx = 0;
    for (const auto& e : j["emitters"]) {
      cfg.emitters.push_back(parse_emitter(e, "emitters[" + std::to_string(idx++) + "]"));
    }
  }

  if (j.contains("dynamics")) {
    const auto& d = j["dynamics"];
    if (d.is_object() && d.contains("from_autocorr")) {
      cfg.dynamics.from_autocorr = d["from_autocorr"].get<bool>();
      cfg.dynamics.target_rate_cps = get_num_or(d, "target_rate_cps", 1020.0);
    } else if (d.is_array()) {
      cfg.dynamics.from_autocorr = false;
      for (const auto& e : d) {
        EmissionDynamics dyn;
        dyn.pump_rate = get_num(e, "pump_per_ns", "dynamics") * 1e9;
        dyn.gamma = 1.0 / ns_to_s(get_num_or(e, "lifetime_ns", 12.0));
        dyn.shelf_prob = get_num_or(e, "shelf_prob", 0.0);
        dyn.shelf_lifetime = ns_to_s(get_num_or(e, "shelf_lifetime_ns", 100.0));
        cfg.dynamics.explicit_dyn.push_back(dyn);
      }
    } else {
      throw DomainError("dynamics must be an object with from_autocorr or an array");
    }
  }

  if (j.contains("detectors")) {
    const auto& d = j["detectors"];
    if (d.contains("C") || d.contains("D")) {
      if (d.contains("C")) cfg.detector_c = parse_detector(d["C"]);
      if (d.contains("D")) cfg.detector_d = parse_detector(d["D"]);
    } else {
      cfg.detector_c = parse_detector(d);
      cfg.detector_d = cfg.detector_c;
    }
  }

  if (j.contains("hom")) {
    const auto& h = j["hom"];
    cfg.xi = get_num_or(h, "xi", 1.0);
    cfg.delta_f0 = get_num_or(h, "delta_f0_mhz", 0.0) * 1e6;
    if (h.contains("polarization")) {
      const std::string p = h["polarization"].get<std::string>();
      if (p == "parallel") {
        cfg.polarization = mc::Polarization::kParallel;
      } else if (p == "perpendicular") {
        cfg.polarization = mc::Polarization::kPerpendicular;
      } else {
        throw DomainError("hom.polarization must be parallel or perpendicular");
      }
    }
    cfg.pairing_window = ns_to_s(get_num_or(h, "pairing_window_ns", 0.0));
    cfg.impurity_detuning = get_num_or(h, "impurity_detuning_ghz", 3.0) * 1e9;
  }

  if (j.contains("correlator")) {
    const auto& c = j["correlator"];
    cfg.correlator.bin_width = get_num_or(c, "bin_ps", 64.0) * 1e-12;
    cfg.correlator.window = ns_to_s(get_num_or(c, "window_ns", 100.0));
    if (c.contains("normalization")) {
      const std::string n = c["normalization"].get<std::string>();
      if (n == "rate-product") {
        cfg.correlator.normalization = tcspc::Normalization::kRateProduct;
      } else if (n == "tail-average") {
        cfg.correlator.normalization = tcspc::Normalization::kTailAverage;
      } else {
        throw DomainError("correlator.normalization must be rate-product or tail-average");
      }
    }
    cfg.fit_rebin = static_cast<int>(get_num_or(c, "fit_rebin", 16));
  }

  if (j.contains("autocorr"))
    cfg.autocorr_emitter = static_cast<int>(get_num_or(j["autocorr"], "emitter", 1));

  if (j.contains("ple")) {
    const auto& p = j["ple"];
    cfg.ple.center = get_num_or(p, "center_mhz", 0.0) * 1e6;
    cfg.ple.span = get_num_or(p, "span_mhz", 1600.0) * 1e6;
    cfg.ple.points = static_cast<int>(get_num_or(p, "points", 321));
    cfg.ple.dwell = get_num_or(p, "dwell_ms", 2.0) * 1e-3;
    cfg.ple.peak_rate = get_num_or(p, "peak_cps", 25e3);
    cfg.ple.background_rate = get_num_or(p, "background_cps", 2e3);
    cfg.ple.init_pulse = get_num_or(p, "init_pulse_us", 5.0) * 1e-6;
  }

  if (j.contains("stark")) {
    const auto& s = j["stark"];
    auto& t = cfg.tuning;
    t.response.field_per_volt_par = get_num_or(s, "field_per_volt_par_mvpm", 0.01) * 1e6;
    t.response.field_per_volt_perp = get_num_or(s, "field_per_volt_perp_mvpm", 0.004) * 1e6;
    // MHz/(MV/m) is numerically Hz/(V/m)
    t.response.d_parallel = get_num_or(s, "d_parallel_mhz_per_mvpm", 0.0);
    t.response.d_perp = get_num_or(s, "d_perp_mhz_per_mvpm", 0.0);
    t.response.v_min = get_num_or(s, "v_min", -30.0);
    t.response.v_max = get_num_or(s, "v_max", 50.0);
    t.tunable_base.f_ex = get_num_or(s, "tunable_f_ex_mhz", 270.0) * 1e6;
    t.tunable_base.f_ey = get_num_or(s, "tunable_f_ey_mhz", -3000.0) * 1e6;
    t.fixed_line = get_num_or(s, "fixed_line_mhz", 0.0) * 1e6;
    t.tunable_fwhm = get_num_or(s, "tunable_fwhm_mhz", 85.0) * 1e6;
    t.fixed_fwhm = get_num_or(s, "fixed_fwhm_mhz", 217.0) * 1e6;
    t.v_start = get_num_or(s, "v_start", -30.0);
    t.v_stop = get_num_or(s, "v_stop", 50.0);
    t.v_step = get_num_or(s, "v_step", 5.0);
    t.display_offset_step = get_num_or(s, "display_offset_kcps", 20.0) * 1e3;
  }

  if (j.contains("budget")) {
    const auto& b = j["budget"];
    auto& bs = cfg.budget_settings;
    bs.budget.baseline = get_num_or(b, "baseline", 0.0);
    if (b.contains("contributions")) {
      for (const auto& c : b["contributions"]) {
        bs.budget.contributions.push_back(
            {c.at("label").get<std::string>(), c.at("delta").get<double>()});
      }
    }
    bs.signal_total = get_num_or(b, "signal_cps", 1100.0);
    bs.noise_total = get_num_or(b, "noise_cps", 80.0);
    bs.purity = get_num_or(b, "purity", 0.94);
    if (b.contains("g2_perp")) {
      bs.g2_perp = {b["g2_perp"].at(0).get<double>(), b["g2_perp"].at(1).get<double>()};
    }
    if (b.contains("g2_par")) {
      bs.g2_par = {b["g2_par"].at(0).get<double>(), b["g2_par"].at(1).get<double>()};
    }
  }

  if (j.contains("rate")) {
    const auto& r = j["rate"];
    cfg.rate.collection_efficiency = get_num_or(r, "collection_efficiency", 4e-5);
    cfg.rate.rep_rate = get_num_or(r, "rep_rate_hz", 1e8);
    cfg.rate.linewidth = get_num_or(r, "linewidth_mhz", 50.0) * 1e6;
    cfg.rate.natural_linewidth = get_num_or(r, "natural_linewidth_mhz", 13.26) * 1e6;
    cfg.rate.success_prefactor = get_num_or(r, "success_prefactor", 0.5);
    if (r.contains("overlap_factor")) cfg.rate.overlap_factor_enabled = r["overlap_factor"].get<bool>();
  }

  cfg.validate();
  return cfg;
}

RunConfig load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void RunConfig::validate() const {
  const bool stochastic = scenario == Scenario::kHom || scenario == Scenario::kAutocorr ||
                          scenario == Scenario::kPle || scenario == Scenario::kTuningScan;
  if (stochastic && !seed.has_value()) {
    throw DomainError("missing field seed (required for scenario " +
                      std::string(to_string(scenario)) + ")");
  }
  if (scenario == Scenario::kHom) {
    if (emitters.size() != 2) throw DomainError("hom scenario needs exactly 2 emitters");
    if (duration <= 0.0) throw DomainError("missing or nonpositive field duration_s");
  }
  if (scenario == Scenario::kAutocorr) {
    if (emitters.empty()) throw DomainError("autocorr scenario needs an emitter");
    if (autocorr_emitter < 1 || autocorr_emitter > static_cast<int>(emitters.size())) {
      throw DomainError("autocorr.emitter out of range");
    }
    if (duration <= 0.0) throw DomainError("missing or nonpositive field duration_s");
  }
  if (scenario == Scenario::kPle && emitters.empty()) {
    throw DomainError("ple scenario needs an emitter");
  }
  for (const auto& e : emitters) e.validate();
  detector_c.validate();
  detector_d.validate();
  if (!dynamics.from_autocorr && !dynamics.explicit_dyn.empty() &&
      dynamics.explicit_dyn.size() != emitters.size()) {
    throw DomainError("dynamics array must match the number of emitters");
  }
  correlator.validate();
  if (fit_rebin < 1) throw DomainError("correlator.fit_rebin must be >= 1");
  if (scenario == Scenario::kBudget) budget_settings.budget.validate();
  if (scenario == Scenario::kRate) rate.validate();
  if (scenario == Scenario::kTuningScan) {
    tuning.response.validate();
    if (tuning.v_step <= 0.0) throw DomainError("stark.v_step must be > 0");
  }
}

std::vector<EmissionDynamics> RunConfig::resolved_dynamics() const {
  if (!dynamics.from_autocorr) {
    require(!dynamics.explicit_dyn.empty(), "no explicit dynamics configured");
    return dynamics.explicit_dyn;
  }
  std::vector<EmissionDynamics> out;
  for (const auto& em : emitters) {
    out.push_back(kinetics::autocorr_to_dynamics(em.autocorr, em.gamma));
  }
  return out;
}

double RunConfig::resolved_efficiency() const {
  if (!dynamics.from_autocorr) return detector_c.efficiency;
  const auto dyn = resolved_dynamics();
  const double em_rate = kinetics::analyze(dyn.front()).emission_rate;
  return dynamics.target_rate_cps / em_rate;
}

mc::HomConfig RunConfig::hom_config() const {
  require(emitters.size() == 2, "hom config needs 2 emitters");
  mc::HomConfig h;
  h.pair.emitter1 = emitters[0];
  h.pair.emitter2 = emitters[1];
  h.pair.xi = xi;
  h.pair.delta_f0 = delta_f0;
  const auto dyn = resolved_dynamics();
  h.dynamics1 = dyn[0];
  h.dynamics2 = dyn[1];
  h.detector_c = detector_c;
  h.detector_d = detector_d;
  if (dynamics.from_autocorr) {
    const double eff = resolved_efficiency();
    h.detector_c.efficiency = eff;
    h.detector_d.efficiency = eff;
  }
  h.polarization = polarization;
  h.pairing_window = pairing_window;
  h.impurity_detuning = impurity_detuning;
  return h;
}

std::string serialize(const RunConfig& cfg) {
  json j;
  j["scenario"] = to_string(cfg.scenario);
  if (cfg.seed) j["seed"] = *cfg.seed;
  if (cfg.duration > 0.0) j["duration_s"] = cfg.duration;
  j["output_dir"] = cfg.output_dir;

  if (!cfg.emitters.empty()) {
    j["emitters"] = json::array();
    for (const auto& e : cfg.emitters) j["emitters"].push_back(emitter_json(e));
  }

  if (cfg.dynamics.from_autocorr) {
    j["dynamics"] = {{"from_autocorr", true}, {"target_rate_cps", cfg.dynamics.target_rate_cps}};
  } else if (!cfg.dynamics.explicit_dyn.empty()) {
    j["dynamics"] = json::array();
    for (const auto& d : cfg.dynamics.explicit_dyn) {
      j["dynamics"].push_back({{"pump_per_ns", d.pump_rate / 1e9},
                               {"lifetime_ns", s_to_ns(1.0 / d.gamma)},
                               {"shelf_prob", d.shelf_prob},
                               {"shelf_lifetime_ns", s_to_ns(d.shelf_lifetime)}});
    }
  }

  j["detectors"] = {{"C", detector_json(cfg.detector_c)}, {"D", detector_json(cfg.detector_d)}};

  if (cfg.scenario == Scenario::kHom) {
    j["hom"] = {{"xi", cfg.xi},
                {"delta_f0_mhz", cfg.delta_f0 / 1e6},
                {"polarization",
                 cfg.polarization == mc::Polarization::kParallel ? "parallel" : "perpendicular"},
                {"pairing_window_ns", s_to_ns(cfg.pairing_window)},
                {"impurity_detuning_ghz", cfg.impurity_detuning / 1e9}};
  }
  if (cfg.scenario == Scenario::kHom || cfg.scenario == Scenario::kAutocorr) {
    j["correlator"] = {
        {"bin_ps", cfg.correlator.bin_width * 1e12},
        {"window_ns", s_to_ns(cfg.correlator.window)},
        {"normalization", cfg.correlator.normalization == tcspc::Normalization::kRateProduct
                              ? "rate-product"
                              : "tail-average"},
        {"fit_rebin", cfg.fit_rebin}};
  }
  if (cfg.scenario == Scenario::kAutocorr) {
    j["autocorr"] = {{"emitter", cfg.autocorr_emitter}};
  }
  if (cfg.scenario == Scenario::kPle || cfg.scenario == Scenario::kTuningScan) {
    j["ple"] = {{"center_mhz", cfg.ple.center / 1e6}, {"span_mhz", cfg.ple.span / 1e6},
                {"points", cfg.ple.points},           {"dwell_ms", cfg.ple.dwell * 1e3},
                {"peak_cps", cfg.ple.peak_rate},      {"background_cps", cfg.ple.background_rate},
                {"init_pulse_us", cfg.ple.init_pulse * 1e6}};
  }
  if (cfg.scenario == Scenario::kTuningScan) {
    const auto& t = cfg.tuning;
    j["stark"] = {{"field_per_volt_par_mvpm", t.response.field_per_volt_par / 1e6},
                  {"field_per_volt_perp_mvpm", t.response.field_per_volt_perp / 1e6},
                  {"d_parallel_mhz_per_mvpm", t.response.d_parallel},
                  {"d_perp_mhz_per_mvpm", t.response.d_perp},
                  {"v_min", t.response.v_min},
                  {"v_max", t.response.v_max},
                  {"tunable_f_ex_mhz", t.tunable_base.f_ex / 1e6},
                  {"tunable_f_ey_mhz", t.tunable_base.f_ey / 1e6},
                  {"fixed_line_mhz", t.fixed_line / 1e6},
                  {"tunable_fwhm_mhz", t.tunable_fwhm / 1e6},
                  {"fixed_fwhm_mhz", t.fixed_fwhm / 1e6},
                  {"v_start", t.v_start},
                  {"v_stop", t.v_stop},
                  {"v_step", t.v_step},
                  {"display_offset_kcps", t.display_offset_step / 1e3}};
  }
  if (cfg.scenario == Scenario::kBudget) {
    json contribs = json::array();
    for (const auto& c : cfg.budget_settings.budget.contributions) {
      contribs.push_back({{"label", c.label}, {"delta", c.delta_g2}});
    }
    j["budget"] = {{"baseline", cfg.budget_settings.budget.baseline},
                   {"contributions", contribs},
                   {"signal_cps", cfg.budget_settings.signal_total},
                   {"noise_cps", cfg.budget_settings.noise_total},
                   {"purity", cfg.budget_settings.purity},
                   {"g2_perp", {cfg.budget_settings.g2_perp.value, cfg.budget_settings.g2_perp.sigma}},
                   {"g2_par", {cfg.budget_settings.g2_par.value, cfg.budget_settings.g2_par.sigma}}};
  }
  if (cfg.scenario == Scenario::kRate) {
    j["rate"] = {{"collection_efficiency", cfg.rate.collection_efficiency},
                 {"rep_rate_hz", cfg.rate.rep_rate},
                 {"linewidth_mhz", cfg.rate.linewidth / 1e6},
                 {"natural_linewidth_mhz", cfg.rate.natural_linewidth / 1e6},
                 {"success_prefactor", cfg.rate.success_prefactor},
                 {"overlap_factor", cfg.rate.overlap_factor_enabled}};
  }
  return j.dump(2) + "\n";
}

}  // namespace homsim::config
