#include "rugose/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rugose/errors.hpp"

namespace rugose {

namespace {

constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 50;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
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

// y grows downward in SVG
double map_y(double y, double y0, double y1, double py_top, double py_bot) {
  return py_top + (y1 - y) / (y1 - y0) * (py_bot - py_top);
}
double map_x(double x, double x0, double x1, double px_left, double px_right) {
  return px_left + (x - x0) / (x1 - x0) * (px_right - px_left);
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step)
    t.push_back(v);
  return t;
}

std::vector<double> decade_ticks(double lo, double hi) {
  std::vector<double> t;
  for (int e = static_cast<int>(std::ceil(lo - 1e-12)); e <= std::floor(hi + 1e-12); ++e)
    t.push_back(e);
  if (t.empty()) t = {lo, hi};
  return t;
}

struct Frame {
  double x0, x1, y0, y1;  // plot-space data range
  double pl, pr, pt, pb;  // pixel box
  bool loglog;
};

void open_svg(std::string& s, const SvgAxes& a) {
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(a.width) + "\" height=\"" + std::to_string(a.height) +
       "\" viewBox=\"0 0 " + std::to_string(a.width) + " " + std::to_string(a.height) +
       "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(a.width) + "\" height=\"" +
       std::to_string(a.height) + "\" fill=\"white\"/>\n";
}

void draw_frame(std::string& s, const SvgAxes& a, const Frame& f) {
  // axis lines
  s += "<line x1=\"" + fmt(f.pl) + "\" y1=\"" + fmt(f.pb) + "\" x2=\"" + fmt(f.pr) +
       "\" y2=\"" + fmt(f.pb) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + fmt(f.pl) + "\" y1=\"" + fmt(f.pt) + "\" x2=\"" + fmt(f.pl) +
       "\" y2=\"" + fmt(f.pb) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const auto xticks = f.loglog ? decade_ticks(f.x0, f.x1) : linear_ticks(f.x0, f.x1);
  const auto yticks = f.loglog ? decade_ticks(f.y0, f.y1) : linear_ticks(f.y0, f.y1);
  for (double v : xticks) {
    const double px = map_x(v, f.x0, f.x1, f.pl, f.pr);
    if (px < f.pl - 0.5 || px > f.pr + 0.5) continue;
    s += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(f.pb) + "\" x2=\"" + fmt(px) +
         "\" y2=\"" + fmt(f.pb + 5) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    const double label = f.loglog ? std::pow(10.0, v) : v;
    s += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(f.pb + 18) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + fmt_label(label) + "</text>\n";
  }
  for (double v : yticks) {
    const double py = map_y(v, f.y0, f.y1, f.pt, f.pb);
    if (py < f.pt - 0.5 || py > f.pb + 0.5) continue;
    s += "<line x1=\"" + fmt(f.pl - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(f.pl) +
         "\" y2=\"" + fmt(py) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    const double label = f.loglog ? std::pow(10.0, v) : v;
    s += "<text x=\"" + fmt(f.pl - 8) + "\" y=\"" + fmt(py + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + fmt_label(label) + "</text>\n";
  }
  // labels
  s += "<text x=\"" + fmt(0.5 * (f.pl + f.pr)) + "\" y=\"" + fmt(f.pb + 35) +
       "\" font-size=\"13\" text-anchor=\"middle\">" + xml_escape(a.x_label) + "</text>\n";
  s += "<text x=\"15\" y=\"" + fmt(0.5 * (f.pt + f.pb)) +
       "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
       fmt(0.5 * (f.pt + f.pb)) + ")\">" + xml_escape(a.y_label) + "</text>\n";
  s += "<text x=\"" + fmt(0.5 * (f.pl + f.pr)) + "\" y=\"22\" font-size=\"14\" "
       "text-anchor=\"middle\">" + xml_escape(a.title) + "</text>\n";
}

Frame make_frame(double x0, double x1, double y0, double y1, const SvgAxes& a) {
  // pad degenerate ranges
  if (x1 - x0 <= 0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 - y0 <= 0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double mx = 0.05 * (x1 - x0), my = 0.05 * (y1 - y0);
  Frame f;
  f.x0 = x0 - mx;
  f.x1 = x1 + mx;
  f.y0 = y0 - my;
  f.y1 = y1 + my;
  f.pl = kMarginL;
  f.pr = a.width - kMarginR;
  f.pt = kMarginT;
  f.pb = a.height - kMarginB;
  f.loglog = a.loglog;
  return f;
}

}  // namespace

std::string svg_scatter(std::span<const std::pair<double, double>> points,
                        const FitResult* fit, const SvgAxes& axes) {
  if (points.empty()) throw Error(Errc::EmptySeries, "svg_scatter: empty series");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(points.size());
  for (auto [x, y] : points) {
    if (axes.loglog) {
      if (!(x > 0) || !(y > 0))
        throw Error(Errc::NonPositiveData, "log-log plot needs positive data");
      pts.emplace_back(std::log10(x), std::log10(y));
    } else {
      pts.emplace_back(x, y);
    }
  }
  double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
  for (auto [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  const Frame f = make_frame(x0, x1, y0, y1, axes);

  std::string s;
  open_svg(s, axes);
  draw_frame(s, axes, f);

  if (fit) {
    // fitted line in plot space; for loglog, log10 y = intercept/ln10 + slope*log10 x
    auto eval = [&](double px) {
      if (axes.loglog) return fit->intercept / std::log(10.0) + fit->slope * px;
      return fit->intercept + fit->slope * px;
    };
    const double ya = eval(f.x0), yb = eval(f.x1);
    s += "<path d=\"M " + fmt(map_x(f.x0, f.x0, f.x1, f.pl, f.pr)) + " " +
         fmt(map_y(ya, f.y0, f.y1, f.pt, f.pb)) + " L " +
         fmt(map_x(f.x1, f.x0, f.x1, f.pl, f.pr)) + " " +
         fmt(map_y(yb, f.y0, f.y1, f.pt, f.pb)) +
         "\" stroke=\"#d62728\" stroke-width=\"1.5\" fill=\"none\"/>\n";
  }
  for (auto [x, y] : pts) {
    s += "<circle cx=\"" + fmt(map_x(x, f.x0, f.x1, f.pl, f.pr)) + "\" cy=\"" +
         fmt(map_y(y, f.y0, f.y1, f.pt, f.pb)) +
         "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string svg_lines(const std::vector<std::vector<std::pair<double, double>>>& curves,
                      const std::vector<std::string>& labels, const SvgAxes& axes) {
  size_t total = 0;
  for (const auto& c : curves) total += c.size();
  if (total == 0) throw Error(Errc::EmptySeries, "svg_lines: empty series");

  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool first = true;
  for (const auto& c : curves) {
    for (auto [x, y] : c) {
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  SvgAxes a = axes;
  a.loglog = false;
  const Frame f = make_frame(x0, x1, y0, y1, a);

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  std::string s;
  open_svg(s, a);
  draw_frame(s, a, f);
  for (size_t ci = 0; ci < curves.size(); ++ci) {
    if (curves[ci].empty()) continue;
    std::string pl = "<polyline points=\"";
    for (auto [x, y] : curves[ci]) {
      pl += fmt(map_x(x, f.x0, f.x1, f.pl, f.pr)) + "," +
            fmt(map_y(y, f.y0, f.y1, f.pt, f.pb)) + " ";
    }
    pl.pop_back();
    pl += "\" fill=\"none\" stroke=\"";
    pl += kColors[ci % 6];
    pl += "\" stroke-width=\"1.5\"/>\n";
    s += pl;
    if (ci < labels.size()) {
      s += "<text x=\"" + fmt(f.pr - 120) + "\" y=\"" + fmt(f.pt + 16 + 14.0 * ci) +
           "\" font-size=\"12\" fill=\"" + kColors[ci % 6] + "\">" +
           xml_escape(labels[ci]) + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace rugose
