// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace elastica_cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Reads two numeric columns (by header name) from a CSV file.
Series read_columns(const std::filesystem::path& csv, const std::string& xcol, const std::string& ycol,
                    const std::string& label);

/// Line plot of one or more series. equal_aspect keeps x and y scales equal (curve plots).
void write_svg(const std::filesystem::path& out, const std::string& title, const std::vector<Series>& series,
               bool equal_aspect);

}  // namespace elastica_cli
