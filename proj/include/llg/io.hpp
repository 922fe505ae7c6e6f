// Plain-text lattice files, shift parsing and CSV/JSON output.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace llg {

/// Reads a square matrix, one row per line, whitespace-separated decimals.
/// Blank lines and lines starting with '#' are ignored.
Eigen::MatrixXd load_matrix_file(const std::string& path);
Eigen::MatrixXd parse_matrix(const std::string& text);

/// A parsed shift: "p1/q p2/q" (denominators may differ; they are brought to a
/// common q), integers, or "irrational x y".
struct ParsedShift {
  bool rational = true;
  std::vector<std::int64_t> p;
  std::int64_t q = 1;
  std::vector<double> value;
};
ParsedShift parse_shift(const std::string& text);

/// Grid "a:b:step" (inclusive, step > 0) or comma-separated list.
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_vector(const std::string& text);

/// Shortest representation that round-trips to the same double.
std::string format_double(double x);

/// Writes a CSV file with the given header line and numeric rows.
void write_csv(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& rows);

}  // namespace llg
