#include "gaussbound/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gaussbound {

namespace {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool finite = true;
};

struct Series {
  std::string name;
  std::vector<Point> points;
};

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell) {
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size())
    throw std::invalid_argument("csv: cell '" + cell + "' is not a number");
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Round-number tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target = 5) {
  if (!(hi > lo)) {
    const double pad = std::max(std::abs(lo), 1.0) * 0.5;
    lo -= pad;
    hi += pad;
  }
  const double raw_step = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw_step) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

}  // namespace

std::string render_chart_svg(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  std::string param_name;
  std::vector<Series> series;
  bool have_header = false;
  bool have_true = false;

  const auto find_series = [&](const std::string& name) -> Series& {
    for (auto& s : series)
      if (s.name == name) return s;
    series.push_back({name, {}});
    return series.back();
  };

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (!have_header) {
      if (cells.size() < 5)
        throw std::invalid_argument("csv: expected at least 5 header columns");
      param_name = cells[0];
      have_header = true;
      continue;
    }
    if (cells.size() < 5) throw std::invalid_argument("csv: row with fewer than 5 columns");
    const double x = parse_cell(cells[0]);
    const double value = parse_cell(cells[2]);
    const double truth = parse_cell(cells[3]);
    find_series(cells[1]).points.push_back({x, value, std::isfinite(value)});
    if (cells[1] != "true_gen") {
      have_true = true;
      find_series("true_gen").points.push_back({x, truth, std::isfinite(truth)});
    }
  }
  if (!have_header) throw std::invalid_argument("csv: missing header");
  if (series.empty()) throw std::invalid_argument("csv: no data rows");

  // The implicit truth series duplicates per family; collapse to unique x.
  if (have_true) {
    Series& truth = find_series("true_gen");
    std::vector<Point> unique;
    for (const Point& pt : truth.points) {
      const bool seen = std::any_of(unique.begin(), unique.end(),
                                    [&](const Point& u) { return u.x == pt.x; });
      if (!seen) unique.push_back(pt);
    }
    truth.points = std::move(unique);
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  double xmin = inf, xmax = -inf, ymin = inf, ymax = -inf;
  for (const auto& s : series) {
    for (const auto& pt : s.points) {
      if (!std::isfinite(pt.x)) continue;
      xmin = std::min(xmin, pt.x);
      xmax = std::max(xmax, pt.x);
      if (pt.finite) {
        ymin = std::min(ymin, pt.y);
        ymax = std::max(ymax, pt.y);
      }
    }
  }
  if (!std::isfinite(xmin) || !std::isfinite(ymin))
    throw std::invalid_argument("csv: no finite data to plot");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  constexpr double width = 800, height = 500;
  constexpr double ml = 80, mr = 170, mt = 30, mb = 60;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  const auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * plot_w; };
  const auto sy = [&](double y) { return mt + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (double t : ticks(xmin, xmax)) {
    const double x = sx(t);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(mt + plot_h) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(mt + plot_h + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << fmt(t)
        << "</text>\n";
  }
  for (double t : ticks(ymin, ymax)) {
    const double y = sy(t);
    out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(ml + plot_w)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(y + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt(t)
        << "</text>\n";
  }
  out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(plot_w)
      << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << fmt(ml + plot_w / 2) << "\" y=\"" << fmt(height - 14)
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape(param_name) << "</text>\n";

  int color = 0;
  for (const auto& s : series) {
    const bool is_truth = s.name == "true_gen";
    const std::string stroke = is_truth ? "#333333" : kPalette[color++ % 10];
    const std::string dash = is_truth ? " stroke-dasharray=\"5,4\"" : "";
    // Break the polyline at non-finite values.
    std::ostringstream seg;
    int seg_points = 0;
    const auto flush = [&] {
      if (seg_points >= 1)
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.8\"" << dash
            << " points=\"" << seg.str() << "\"/>\n";
      seg.str("");
      seg_points = 0;
    };
    for (const auto& pt : s.points) {
      if (!pt.finite) {
        flush();
        continue;
      }
      if (seg_points > 0) seg << ' ';
      seg << fmt(sx(pt.x)) << ',' << fmt(sy(pt.y));
      ++seg_points;
    }
    flush();
    const double ly = mt + 16.0 * (&s - series.data());
    out << "<line x1=\"" << fmt(ml + plot_w + 10) << "\" y1=\"" << fmt(ly + 4) << "\" x2=\""
        << fmt(ml + plot_w + 34) << "\" y2=\"" << fmt(ly + 4) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"1.8\"" << dash << "/>\n";
    out << "<text x=\"" << fmt(ml + plot_w + 40) << "\" y=\"" << fmt(ly + 8)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape(s.name) << "</text>\n";
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace gaussbound
