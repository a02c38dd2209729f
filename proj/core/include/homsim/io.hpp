#pragma once

#include <filesystem>
#include <string>

#include "homsim/correlator.hpp"
#include "homsim/fit.hpp"
#include "homsim/mc.hpp"
#include "homsim/types.hpp"

// File formats. Click streams are stored either as CSV
// (detector_id,time_ps,provenance) or as a columnar binary with a small
// header; timestamps are 64-bit integer picoseconds in both. Histograms go
// to CSV (tau_ps,counts,g2,g2_err) with a JSON sidecar holding the
// configuration, rates and duration. All writers are deterministic: no
// timestamps, no locale dependence, shortest round-trip float formatting.

namespace homsim::io {

void write_clicks_csv(const std::filesystem::path& path, const ClickStream& stream);
ClickStream read_clicks_csv(const std::filesystem::path& path);

void write_clicks_binary(const std::filesystem::path& path, const ClickStream& stream);
ClickStream read_clicks_binary(const std::filesystem::path& path);

// Dispatch on extension: .csv or .bin
ClickStream read_clicks(const std::filesystem::path& path);

void write_histogram_csv(const std::filesystem::path& path,
                         const tcspc::CorrelationHistogram& hist);
// JSON header: config, rates, duration, seed.
void write_histogram_json(const std::filesystem::path& path,
                          const tcspc::CorrelationHistogram& hist, std::uint64_t seed,
                          const std::string& scenario);

void write_spectrum_csv(const std::filesystem::path& path, const mc::Spectrum& spectrum);

std::string fit_result_json(const fitting::FitResult& fit, const std::string& settings_hash);
void write_fit_json(const std::filesystem::path& path, const fitting::FitResult& fit,
                    const std::string& settings_hash);

// Shortest round-trip decimal representation (to_chars), "nan"/"inf" spelled out.
std::string format_double(double x);

}  // namespace homsim::io
