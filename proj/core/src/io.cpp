#include "homsim/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace homsim::io {

namespace {

constexpr char kBinaryMagic[8] = {'h', 's', 'c', 'l', 'i', 'c', 'k', '1'};

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  return f;
}

Provenance provenance_from(const std::string& s) {
  if (s == "signal1") return Provenance::Signal1;
  if (s == "signal2") return Provenance::Signal2;
  if (s == "dark") return Provenance::Dark;
  if (s == "background") return Provenance::Background;
  throw std::runtime_error("unknown provenance tag: " + s);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

void write_clicks_csv(const std::filesystem::path& path, const ClickStream& stream) {
  auto f = open_out(path);
  f << "# duration_s=" << format_double(stream.duration) << " seed=" << stream.seed << "\n";
  f << "detector,time_ps,provenance\n";
  for (const auto& c : stream.clicks) {
    f << to_string(c.detector) << ',' << c.time_ps << ',' << to_string(c.provenance) << '\n';
  }
}

ClickStream read_clicks_csv(const std::filesystem::path& path) {
  auto f = open_in(path);
  ClickStream out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        if (tok.rfind("duration_s=", 0) == 0) out.duration = std::stod(tok.substr(11));
        if (tok.rfind("seed=", 0) == 0) out.seed = std::stoull(tok.substr(5));
      }
      continue;
    }
    if (line.rfind("detector", 0) == 0) continue;
    std::istringstream ls(line);
    std::string det, t, prov;
    if (!std::getline(ls, det, ',') || !std::getline(ls, t, ',') || !std::getline(ls, prov)) {
      throw std::runtime_error("malformed click row: " + line);
    }
    if (det != "C" && det != "D") throw std::runtime_error("unknown detector id: " + det);
    Click c;
    c.detector = (det == "C") ? Detector::C : Detector::D;
    c.time_ps = std::stoll(t);
    c.provenance = provenance_from(prov);
    out.clicks.push_back(c);
  }
  return out;
}

void write_clicks_binary(const std::filesystem::path& path, const ClickStream& stream) {
  auto f = open_out(path, true);
  f.write(kBinaryMagic, sizeof(kBinaryMagic));
  const std::uint64_t n = stream.clicks.size();
  const std::uint64_t seed = stream.seed;
  const double duration = stream.duration;
  f.write(reinterpret_cast<const char*>(&n), sizeof(n));
  f.write(reinterpret_cast<const char*>(&seed), sizeof(seed));
  f.write(reinterpret_cast<const char*>(&duration), sizeof(duration));
  for (const auto& c : stream.clicks) {
    f.write(reinterpret_cast<const char*>(&c.time_ps), sizeof(c.time_ps));
  }
  for (const auto& c : stream.clicks) f.put(static_cast<char>(c.detector));
  for (const auto& c : stream.clicks) f.put(static_cast<char>(c.provenance));
}

ClickStream read_clicks_binary(const std::filesystem::path& path) {
  auto f = open_in(path, true);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kBinaryMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a click stream binary: " + path.string());
  }
  std::uint64_t n = 0, seed = 0;
  double duration = 0.0;
  f.read(reinterpret_cast<char*>(&n), sizeof(n));
  f.read(reinterpret_cast<char*>(&seed), sizeof(seed));
  f.read(reinterpret_cast<char*>(&duration), sizeof(duration));
  ClickStream out;
  out.seed = seed;
  out.duration = duration;
  out.clicks.resize(n);
  for (auto& c : out.clicks) f.read(reinterpret_cast<char*>(&c.time_ps), sizeof(c.time_ps));
  for (auto& c : out.clicks) c.detector = static_cast<Detector>(f.get());
  for (auto& c : out.clicks) c.provenance = static_cast<Provenance>(f.get());
  if (!f) throw std::runtime_error("truncated click stream binary: " + path.string());
  return out;
}

ClickStream read_clicks(const std::filesystem::path& path) {
  if (path.extension() == ".bin") return read_clicks_binary(path);
  return read_clicks_csv(path);
}

void write_histogram_csv(const std::filesystem::path& path,
                         const tcspc::CorrelationHistogram& hist) {
  auto f = open_out(path);
  f << "tau_ps,counts,g2,g2_err\n";
  for (std::size_t i = 0; i < hist.size(); ++i) {
    f << static_cast<std::int64_t>(std::llround(hist.bin_centers[i] * 1e12)) << ','
      << hist.counts[i] << ',';
    if (hist.normalized) {
      f << format_double(hist.g2[i]) << ',' << format_double(hist.g2_err[i]);
    } else {
      f << ',';
    }
    f << '\n';
  }
}

void write_histogram_json(const std::filesystem::path& path,
                          const tcspc::CorrelationHistogram& hist, std::uint64_t seed,
                          const std::string& scenario) {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["bin_width_ps"] = hist.bin_width * 1e12;
  j["bins"] = hist.size();
  j["duration_s"] = hist.duration;
  j["rate_c_cps"] = hist.rate_c;
  j["rate_d_cps"] = hist.rate_d;
  j["total_counts"] = hist.total_counts();
  j["normalization"] =
      hist.normalization == tcspc::Normalization::kRateProduct ? "rate-product" : "tail-average";
  j["normalized"] = hist.normalized;
  if (hist.normalized) j["norm_denom"] = hist.norm_denom;
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

void write_spectrum_csv(const std::filesystem::path& path, const mc::Spectrum& spectrum) {
  auto f = open_out(path);
  f << "freq_mhz,counts,rate_cps\n";
  for (std::size_t i = 0; i < spectrum.freq.size(); ++i) {
    f << format_double(spectrum.freq[i] / 1e6) << ',' << spectrum.counts[i] << ','
      << format_double(static_cast<double>(spectrum.counts[i]) / spectrum.dwell) << '\n';
  }
}

std::string fit_result_json(const fitting::FitResult& fit, const std::string& settings_hash) {
  nlohmann::json j;
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    j["params"][fit.names[i]] = fit.params[i];
    j["sigmas"][fit.names[i]] = fit.sigmas[i];
  }
  j["chi2"] = fit.chi2;
  j["chi2_reduced"] = fit.chi2_reduced;
  j["converged"] = fit.converged;
  j["n_iter"] = fit.n_iter;
  j["settings_hash"] = settings_hash;
  return j.dump(2);
}

void write_fit_json(const std::filesystem::path& path, const fitting::FitResult& fit,
                    const std::string& settings_hash) {
  auto f = open_out(path);
  f << fit_result_json(fit, settings_hash) << '\n';
}

}  // namespace homsim::io
