#include "quasitop/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <locale>
#include <sstream>

namespace quasitop::io {

namespace {

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// pixel coordinates are printed with 2 decimals
std::string px(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::vector<double> ticks(double lo, double hi, int target) {
  double span = hi - lo;
  if (!(span > 0)) return {lo};
  double raw = span / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) { step = m * mag; break; }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

}  // namespace

std::string render_svg(const Plot& plot, const Metadata& meta, const std::optional<std::string>& timestamp) {
  const double W = plot.width, H = plot.height;
  const double ml = 72, mr = 150, mt = 40, mb = 56;
  const double pw = W - ml - mr, ph = H - mt - mb;

  auto ty = [&](double y) { return plot.log_y ? std::log10(std::max(y, 1e-300)) : y; };
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const Series& s : plot.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (plot.log_y && !(s.y[i] > 0)) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, ty(s.y[i]));
      yhi = std::max(yhi, ty(s.y[i]));
    }
  if (xlo > xhi) { xlo = 0; xhi = 1; ylo = 0; yhi = 1; }
  if (xhi == xlo) { xlo -= 0.5; xhi += 0.5; }
  if (yhi == ylo) { ylo -= 0.5; yhi += 0.5; }
  double pad = 0.04 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  auto X = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * pw; };
  auto Y = [&](double y) { return mt + (1.0 - (ty(y) - ylo) / (yhi - ylo)) * ph; };
  auto Yraw = [&](double t) { return mt + (1.0 - (t - ylo) / (yhi - ylo)) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- quasitop " << module_version << " command=" << meta.command << " config_hash=" << meta.config_hash << " -->\n";
  if (timestamp) os << "<!-- generated " << esc(*timestamp) << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << plot.width << "\" height=\"" << plot.height
     << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\">\n";
  os << "<metadata>" << esc(meta.config_json) << "</metadata>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << plot.width << "\" height=\"" << plot.height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << px(ml + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << esc(plot.title) << "</text>\n";
  os << "<rect x=\"" << px(ml) << "\" y=\"" << px(mt) << "\" width=\"" << px(pw) << "\" height=\"" << px(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ticks(xlo, xhi, 6)) {
    os << "<line x1=\"" << px(X(t)) << "\" y1=\"" << px(mt + ph) << "\" x2=\"" << px(X(t)) << "\" y2=\"" << px(mt + ph + 5)
       << "\" stroke=\"black\"/>";
    os << "<text x=\"" << px(X(t)) << "\" y=\"" << px(mt + ph + 18) << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : ticks(ylo, yhi, 6)) {
    std::string label = plot.log_y ? "1e" + fmt(t) : fmt(t);
    os << "<line x1=\"" << px(ml - 5) << "\" y1=\"" << px(Yraw(t)) << "\" x2=\"" << px(ml) << "\" y2=\"" << px(Yraw(t))
       << "\" stroke=\"black\"/>";
    os << "<text x=\"" << px(ml - 8) << "\" y=\"" << px(Yraw(t) + 4) << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  os << "<text x=\"" << px(ml + pw / 2) << "\" y=\"" << px(H - 14) << "\" text-anchor=\"middle\" font-size=\"13\">"
     << esc(plot.xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << px(mt + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << px(mt + ph / 2) << ")\">" << esc(plot.ylabel) << (plot.log_y ? " (log)" : "") << "</text>\n";
  os << "</g>\n";

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const Series& s = plot.series[si];
    std::string color = s.color.empty() ? palette[si % 8] : s.color;
    // non-finite points split a line into separate polylines
    std::vector<std::vector<std::pair<double, double>>> runs(1);
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        if (!runs.back().empty()) runs.emplace_back();
        continue;
      }
      if (plot.log_y && !(s.y[i] > 0)) continue;
      runs.back().emplace_back(X(s.x[i]), Y(s.y[i]));
    }
    if (s.mark == Mark::Scatter) {
      os << "<g fill=\"" << color << "\">";
      for (auto& pts : runs)
        for (auto& [x, y] : pts) os << "<circle cx=\"" << px(x) << "\" cy=\"" << px(y) << "\" r=\"1.6\"/>";
      os << "</g>\n";
    } else {
      for (auto& pts : runs) {
        if (pts.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.3\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (s.mark == Mark::Step && i > 0) os << px(pts[i].first) << ',' << px(pts[i - 1].second) << ' ';
          os << px(pts[i].first) << ',' << px(pts[i].second) << (i + 1 < pts.size() ? " " : "");
        }
        os << "\"/>\n";
      }
    }
    double ly = mt + 14 + 18.0 * static_cast<double>(si);
    os << "<line x1=\"" << px(ml + pw + 12) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(ml + pw + 32) << "\" y2=\"" << px(ly)
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    os << "<text x=\"" << px(ml + pw + 38) << "\" y=\"" << px(ly + 4)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << esc(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace quasitop::io
