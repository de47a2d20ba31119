// SPDX-License-Identifier: Apache-2.0
#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace elastica_cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

}  // namespace

Series read_columns(const std::filesystem::path& csv, const std::string& xcol, const std::string& ycol,
                    const std::string& label) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open " + csv.string());
  std::string line;
  std::getline(in, line);
  const std::vector<std::string> header = split(line);
  const auto xi = std::find(header.begin(), header.end(), xcol);
  const auto yi = std::find(header.begin(), header.end(), ycol);
  if (xi == header.end() || yi == header.end()) {
    throw std::runtime_error(csv.string() + ": missing column " + xcol + " or " + ycol);
  }
  const std::size_t xk = static_cast<std::size_t>(xi - header.begin());
  const std::size_t yk = static_cast<std::size_t>(yi - header.begin());
  Series s{label, {}, {}};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() <= std::max(xk, yk)) throw std::runtime_error(csv.string() + ": short row");
    s.x.push_back(std::stod(cells[xk]));
    s.y.push_back(std::stod(cells[yk]));
  }
  return s;
}

void write_svg(const std::filesystem::path& out, const std::string& title, const std::vector<Series>& series,
               bool equal_aspect) {
  constexpr double width = 640.0;
  constexpr double height = 480.0;
  constexpr double margin = 50.0;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0.0;
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  double sx = (width - 2 * margin) / (xmax - xmin);
  double sy = (height - 2 * margin) / (ymax - ymin);
  if (equal_aspect) sx = sy = std::min(sx, sy);

  std::ofstream o(out);
  if (!o) throw std::runtime_error("cannot write " + out.string());
  o << std::fixed << std::setprecision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  o << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\""
    << height - 2 * margin << "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = palette[k % std::size(palette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << margin + (s.x[i] - xmin) * sx << ',' << height - margin - (s.y[i] - ymin) * sy << ' ';
    }
    o << "\"/>\n";
    o << "<text x=\"" << width - margin - 150 << "\" y=\"" << margin + 18 * (k + 1)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">" << escape(s.label)
      << "</text>\n";
  }
  o << std::setprecision(4);
  o << "<text x=\"" << margin << "\" y=\"" << height - 18 << "\" font-family=\"sans-serif\" font-size=\"11\">x: ["
    << xmin << ", " << xmax << "]  y: [" << ymin << ", " << ymax << "]</text>\n";
  o << "</svg>\n";
}

}  // namespace elastica_cli
