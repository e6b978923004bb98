#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace docstat::svg {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 50, kBottom = 60;
constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (lo == hi) lo -= 0.5, hi += 0.5;
  }
};

class Canvas {
 public:
  Canvas(Range xr, Range yr) : xr_(xr), yr_(yr) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
         << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  double px(double x) const {
    return kLeft + (x - xr_.lo) / (xr_.hi - xr_.lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - yr_.lo) / (yr_.hi - yr_.lo) * (kHeight - kTop - kBottom);
  }

  void frame(const Axes& axes) {
    out_ << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
         << num(kWidth - kLeft - kRight) << "\" height=\"" << num(kHeight - kTop - kBottom)
         << "\" fill=\"none\" stroke=\"black\"/>\n";
    text(kWidth / 2, 25, axes.title, 16, "middle");
    text(kWidth / 2, kHeight - 15, axes.x_label, 12, "middle");
    out_ << "<text x=\"18\" y=\"" << num(kHeight / 2) << "\" font-size=\"12\" text-anchor=\"middle\""
         << " transform=\"rotate(-90 18 " << num(kHeight / 2) << ")\">" << escape(axes.y_label)
         << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = xr_.lo + (xr_.hi - xr_.lo) * i / 4.0;
      const double yv = yr_.lo + (yr_.hi - yr_.lo) * i / 4.0;
      text(px(xv), kHeight - kBottom + 16, num(xv), 10, "middle");
      text(kLeft - 6, py(yv) + 4, num(yv), 10, "end");
    }
  }

  void text(double x, double y, const std::string& s, int size, const char* anchor) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
         << "\" text-anchor=\"" << anchor << "\">" << escape(s) << "</text>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& color,
            const char* dash = nullptr) {
    out_ << "<line x1=\"" << num(px(x1)) << "\" y1=\"" << num(py(y1)) << "\" x2=\"" << num(px(x2))
         << "\" y2=\"" << num(py(y2)) << "\" stroke=\"" << color << "\"";
    if (dash) out_ << " stroke-dasharray=\"" << dash << "\"";
    out_ << "/>\n";
  }

  void polyline(const std::vector<double>& x, const std::vector<double>& y,
                const std::string& color) {
    out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
      out_ << num(px(x[i])) << ',' << num(py(y[i])) << ' ';
    }
    out_ << "\"/>\n";
  }

  void circle(double x, double y, const std::string& color) {
    out_ << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"2.5\" fill=\""
         << color << "\" fill-opacity=\"0.6\"/>\n";
  }

  void bar(double x0, double x1, double h, const std::string& color) {
    out_ << "<rect x=\"" << num(px(x0)) << "\" y=\"" << num(py(h)) << "\" width=\""
         << num(std::max(0.0, px(x1) - px(x0))) << "\" height=\"" << num(py(0) - py(h))
         << "\" fill=\"" << color << "\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = kTop + 16;
    for (const auto& [name, color] : entries) {
      out_ << "<rect x=\"" << num(kWidth - kRight - 140) << "\" y=\"" << num(y - 9)
           << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
      text(kWidth - kRight - 125, y, name, 11, "start");
      y += 16;
    }
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

  std::ostringstream& raw() { return out_; }

 private:
  Range xr_, yr_;
  std::ostringstream out_;
};

}  // namespace

std::string line_chart(const std::vector<Series>& series, const Axes& axes, bool diagonal,
                       bool unit_square) {
  Range xr, yr;
  if (unit_square) {
    xr = {0, 1};
    yr = {0, 1};
  } else {
    for (const auto& s : series) {
      for (const double v : s.x) xr.add(v);
      for (const double v : s.y) yr.add(v);
    }
    yr.add(0.0);
    xr.finish();
    yr.finish();
  }
  Canvas c(xr, yr);
  c.frame(axes);
  if (diagonal) c.line(0, 0, 1, 1, "#999999", "4 4");
  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::string color = kPalette[i % kPalette.size()];
    c.polyline(series[i].x, series[i].y, color);
    legend.emplace_back(series[i].name, color);
  }
  if (series.size() > 1) c.legend(legend);
  return c.finish();
}

std::string scatter(const std::vector<ScatterGroup>& groups, const Axes& axes,
                    const std::vector<std::string>& point_labels) {
  Range xr, yr;
  for (const auto& g : groups) {
    for (const double v : g.x) xr.add(v);
    for (const double v : g.y) yr.add(v);
  }
  xr.finish();
  yr.finish();
  // Pad so edge points are not clipped by the frame.
  const double dx = (xr.hi - xr.lo) * 0.05, dy = (yr.hi - yr.lo) * 0.05;
  xr.lo -= dx, xr.hi += dx, yr.lo -= dy, yr.hi += dy;
  Canvas c(xr, yr);
  c.frame(axes);
  std::vector<std::pair<std::string, std::string>> legend;
  std::size_t label_index = 0;
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      c.circle(g.x[i], g.y[i], g.color);
      if (label_index < point_labels.size())
        c.text(c.px(g.x[i]) + 4, c.py(g.y[i]) - 4, point_labels[label_index++], 9, "start");
    }
    legend.emplace_back(g.name, g.color);
  }
  if (groups.size() > 1) c.legend(legend);
  return c.finish();
}

std::string histogram(const std::vector<double>& edges, const std::vector<double>& counts,
                      const Axes& axes, double marker_x, const std::string& note) {
  Range xr, yr;
  for (const double e : edges) xr.add(e);
  xr.add(marker_x);
  yr.add(0);
  for (const double v : counts) yr.add(v);
  xr.finish();
  yr.finish();
  Canvas c(xr, yr);
  c.frame(axes);
  for (std::size_t i = 0; i + 1 < edges.size() && i < counts.size(); ++i)
    c.bar(edges[i], edges[i + 1], counts[i], kPalette[0]);
  c.line(marker_x, yr.lo, marker_x, yr.hi, "#d62728");
  if (!note.empty()) c.text(kWidth / 2, 42, note, 11, "middle");
  return c.finish();
}

std::string heatmap(const std::vector<std::string>& labels, const std::vector<double>& values,
                    const std::string& title) {
  const std::size_t n = labels.size();
  constexpr double kSize = 640, kMargin = 140;
  const double cell = n == 0 ? 0 : (kSize - kMargin - 20) / static_cast<double>(n);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kSize) << "\" height=\""
      << num(kSize) << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kSize / 2) << "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">"
      << escape(title) << "</text>\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Grey scale: -1 black, +1 white (higher correlation = brighter).
      const double v = std::clamp(values[i * n + j], -1.0, 1.0);
      const int g = static_cast<int>(std::lround((v + 1.0) / 2.0 * 255.0));
      out << "<rect x=\"" << num(kMargin + j * cell) << "\" y=\"" << num(kMargin + i * cell)
          << "\" width=\"" << num(cell) << "\" height=\"" << num(cell) << "\" fill=\"rgb(" << g
          << ',' << g << ',' << g << ")\"><title>" << escape(labels[i]) << " / "
          << escape(labels[j]) << ": " << num(values[i * n + j]) << "</title></rect>\n";
    }
    out << "<text x=\"" << num(kMargin - 4) << "\" y=\"" << num(kMargin + (i + 0.6) * cell)
        << "\" font-size=\"9\" text-anchor=\"end\">" << escape(labels[i]) << "</text>\n";
    const double x = kMargin + (i + 0.6) * cell;
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kMargin - 4)
        << "\" font-size=\"9\" text-anchor=\"start\" transform=\"rotate(-60 " << num(x) << ' '
        << num(kMargin - 4) << ")\">" << escape(labels[i]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace docstat::svg
