#pragma once

#include <cstdint>

// SI units are used throughout the library: seconds, hertz, volts, counts/s.
// Config files use lab-bench units (ns, MHz, V, kCts/s); conversions live here.
// Click timestamps are 64-bit integer picoseconds so that binning at 64 ps is
// exact and long runs do not accumulate float drift.

namespace homsim {

constexpr double kPicosecond = 1e-12;
constexpr double kNanosecond = 1e-9;
constexpr double kMicrosecond = 1e-6;
constexpr double kMillisecond = 1e-3;
constexpr double kMegahertz = 1e6;
constexpr double kGigahertz = 1e9;

constexpr double ns_to_s(double ns) { return ns * kNanosecond; }
constexpr double s_to_ns(double s) { return s / kNanosecond; }
constexpr double mhz_to_hz(double mhz) { return mhz * kMegahertz; }
constexpr double hz_to_mhz(double hz) { return hz / kMegahertz; }
constexpr double ps_to_s(double ps) { return ps * kPicosecond; }
constexpr double s_to_ps(double s) { return s / kPicosecond; }

using TimePs = std::int64_t;

constexpr TimePs kPsPerSecond = 1'000'000'000'000LL;

}  // namespace homsim
