#pragma once

// CSV, line-delimited JSON and SVG output. File output uses 17 significant
// digits; human-facing output uses 6.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssg/bounds.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/rng.hpp"
#include "ssg/sample_io.hpp"
#include "ssg/split_sample.hpp"

namespace ssg {

inline std::string format_human(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// 16 hex digits of FNV-1a over the canonical text.
inline std::string fingerprint(const nlohmann::json& canonical) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical.dump())));
  return buf;
}

inline nlohmann::json to_json(const AuctionClass& cls) {
  return {{"class", std::string(class_name(cls.kind))},
          {"n", cls.bidders},
          {"k", cls.items},
          {"s", cls.levels},
          {"anonymous", cls.anonymous}};
}

inline void write_growth_csv_header(std::ostream& out) {
  out << "class,m,n,k,s,draws,observed_max,log_bound\n";
}

inline void write_growth_csv_row(std::ostream& out, const GrowthEstimate& g) {
  out << class_name(g.cls.kind) << ',' << g.m << ',' << g.cls.bidders << ',' << g.cls.items << ','
      << g.cls.levels << ',' << g.draws << ',' << g.observed_max << ',' << format_exact(g.bound.log_value) << '\n';
}

inline void write_bound_csv_header(std::ostream& out) {
  out << "class,m,n,k,s,delta,log_tau_2m,bound,hp_bound,vacuous_flag\n";
}

inline void write_bound_csv_row(std::ostream& out, const BoundReport& b) {
  out << class_name(b.cls.kind) << ',' << b.m << ',' << b.cls.bidders << ',' << b.cls.items << ','
      << b.cls.levels << ',' << (b.delta ? format_exact(*b.delta) : "") << ',' << format_exact(b.log_tau_2m) << ','
      << format_exact(b.expected_gap) << ',' << (b.high_prob ? format_exact(*b.high_prob) : "") << ','
      << (b.vacuous() ? 1 : 0) << '\n';
}

// Minimal line chart: one polyline per series over a shared x axis.
struct ChartSeries {
  std::string label;
  std::string color;
  std::vector<double> y;
};

inline void write_svg_chart(std::ostream& out, const std::string& title, const std::vector<double>& x,
                            const std::vector<ChartSeries>& series) {
  constexpr double width = 640;
  constexpr double height = 400;
  constexpr double margin = 50;
  double xmin = x.empty() ? 0 : *std::min_element(x.begin(), x.end());
  double xmax = x.empty() ? 1 : *std::max_element(x.begin(), x.end());
  double ymax = 0.0;
  for (const auto& s : series) {
    for (double v : s.y) ymax = std::max(ymax, v);
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= 0) ymax = 1;
  const auto px = [&](double v) { return margin + (v - xmin) / (xmax - xmin) * (width - 2 * margin); };
  const auto py = [&](double v) { return height - margin - v / ymax * (height - 2 * margin); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<text x=\"" << margin << "\" y=\"25\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << margin - 45 << "\" y=\"" << margin << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_human(ymax) << "</text>\n";
  for (double v : x) {
    out << "<text x=\"" << px(v) - 10 << "\" y=\"" << height - margin + 15
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_human(v) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << series[s].color << "\" points=\"";
    for (std::size_t i = 0; i < x.size() && i < series[s].y.size(); ++i) {
      out << (i ? " " : "") << format_human(px(x[i])) << ',' << format_human(py(series[s].y[i]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - margin - 120 << "\" y=\"" << margin + 15 * static_cast<double>(s)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << series[s].color << "\">" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ssg
