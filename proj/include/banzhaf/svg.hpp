// Copyright 2026 The banzhaf-lw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BANZHAF_SVG_HPP
#define BANZHAF_SVG_HPP

#include <banzhaf/error.hpp>
#include <banzhaf/game.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace banzhaf::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool line = true;  // polyline, otherwise dots
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

namespace detail {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

inline std::string num(double v) { return banzhaf::detail::format_real(v, 6); }

}  // namespace detail

/// A 640x420 chart with one axis box, min/max tick labels and a legend.
inline void write(std::ostream& out, const Plot& plot) {
  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
  static const std::array<const char*, 6> colors{"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : plot.series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x); x1 = std::max(x1, x);
      y0 = std::min(y0, y); y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << detail::escape(plot.title)
      << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << (W - L - R) << "\" height=\"" << (H - T - B)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << L << "\" y=\"" << (H - B + 16) << "\" text-anchor=\"middle\">" << detail::num(x0) << "</text>\n";
  out << "<text x=\"" << (W - R) << "\" y=\"" << (H - B + 16) << "\" text-anchor=\"middle\">" << detail::num(x1)
      << "</text>\n";
  out << "<text x=\"" << (L - 6) << "\" y=\"" << (H - B) << "\" text-anchor=\"end\">" << detail::num(y0) << "</text>\n";
  out << "<text x=\"" << (L - 6) << "\" y=\"" << (T + 10) << "\" text-anchor=\"end\">" << detail::num(y1) << "</text>\n";
  out << "<text x=\"" << (L + (W - L - R) / 2) << "\" y=\"" << (H - 12) << "\" text-anchor=\"middle\">"
      << detail::escape(plot.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << (T + (H - T - B) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + (H - T - B) / 2) << ")\">" << detail::escape(plot.y_label) << "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = colors[k % colors.size()];
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (auto [x, y] : s.points) {
        if (std::isfinite(x) && std::isfinite(y)) out << detail::num(sx(x)) << ',' << detail::num(sy(y)) << ' ';
      }
      out << "\"/>\n";
    } else {
      for (auto [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        out << "<circle cx=\"" << detail::num(sx(x)) << "\" cy=\"" << detail::num(sy(y)) << "\" r=\"1.5\" fill=\""
            << color << "\" fill-opacity=\"0.5\"/>\n";
      }
    }
    const double ly = T + 14 + 18.0 * static_cast<double>(k);
    out << "<rect x=\"" << (W - R + 10) << "\" y=\"" << (ly - 9) << "\" width=\"10\" height=\"10\" fill=\"" << color
        << "\"/>\n";
    out << "<text x=\"" << (W - R + 26) << "\" y=\"" << ly << "\">" << detail::escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

inline void save(const std::filesystem::path& path, const Plot& plot) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write(out, plot);
}

}  // namespace banzhaf::svg

#endif  // BANZHAF_SVG_HPP
