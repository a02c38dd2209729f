#include "homsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "homsim/io.hpp"
#include "homsim/types.hpp"

namespace homsim::svg {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad(double frac) {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
      return;
    }
    const double d = (hi - lo) * frac;
    lo -= d;
    hi += d;
  }
};

// round tick spacing to 1/2/5 * 10^k
double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(target_ticks, 2);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2.0 * mag;
  if (r < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

std::string fmt_tick(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void write_svg(const std::filesystem::path& path, const Figure& fig) {
  Range rx, ry;
  for (const auto& s : fig.series) {
    for (double v : s.x) rx.add(v);
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      ry.add(s.y[i]);
      if (i < s.yerr.size() && std::isfinite(s.yerr[i])) {
        ry.add(s.y[i] + s.yerr[i]);
        ry.add(s.y[i] - s.yerr[i]);
      }
    }
  }
  rx.pad(0.02);
  ry.pad(0.06);

  const double ml = 72, mr = 20, mt = 34, mb = 52;
  const double pw = fig.width - ml - mr;
  const double ph = fig.height - mt - mb;
  auto X = [&](double v) { return ml + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto Y = [&](double v) { return mt + ph - (v - ry.lo) / (ry.hi - ry.lo) * ph; };

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fig.width << "\" height=\""
    << fig.height << "\" viewBox=\"0 0 " << fig.width << ' ' << fig.height << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<g font-family=\"sans-serif\" font-size=\"12\">\n";

  // frame
  f << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double sx = nice_step(rx.hi - rx.lo, 8);
  for (double v = std::ceil(rx.lo / sx) * sx; v <= rx.hi + 1e-12 * sx; v += sx) {
    const double px = X(v);
    f << "<line x1=\"" << px << "\" y1=\"" << mt + ph << "\" x2=\"" << px << "\" y2=\""
      << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    f << "<text x=\"" << px << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
      << fmt_tick(v) << "</text>\n";
  }
  const double sy = nice_step(ry.hi - ry.lo, 6);
  for (double v = std::ceil(ry.lo / sy) * sy; v <= ry.hi + 1e-12 * sy; v += sy) {
    const double py = Y(v);
    f << "<line x1=\"" << ml - 5 << "\" y1=\"" << py << "\" x2=\"" << ml << "\" y2=\"" << py
      << "\" stroke=\"black\"/>\n";
    f << "<text x=\"" << ml - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << fmt_tick(v)
      << "</text>\n";
  }

  f << "<text x=\"" << ml + pw / 2 << "\" y=\"" << fig.height - 12
    << "\" text-anchor=\"middle\">" << fig.x_label << "</text>\n";
  f << "<text x=\"16\" y=\"" << mt + ph / 2
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">"
    << fig.y_label << "</text>\n";
  f << "<text x=\"" << ml + pw / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << fig.title << "</text>\n";

  int legend_row = 0;
  for (const auto& s : fig.series) {
    if (s.as_line) {
      f << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        f << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
      }
      f << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double px = X(s.x[i]);
        const double py = Y(s.y[i]);
        if (i < s.yerr.size() && std::isfinite(s.yerr[i]) && s.yerr[i] > 0.0) {
          f << "<line x1=\"" << px << "\" y1=\"" << Y(s.y[i] - s.yerr[i]) << "\" x2=\"" << px
            << "\" y2=\"" << Y(s.y[i] + s.yerr[i]) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"0.8\"/>\n";
        }
        f << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"1.6\" fill=\"" << s.color
          << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      const double lx = ml + pw - 150;
      const double ly = mt + 16 + 16 * legend_row++;
      f << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
      f << "<text x=\"" << lx + 30 << "\" y=\"" << ly << "\">" << s.label << "</text>\n";
    }
  }
  f << "</g>\n</svg>\n";
}

}  // namespace homsim::svg
