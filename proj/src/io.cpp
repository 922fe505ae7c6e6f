#include "llg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace llg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

}  // namespace

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(to_double(tok));
    rows.push_back(row);
  }
  const std::size_t d = rows.size();
  if (d < 2) throw std::invalid_argument("matrix needs at least two rows");
  Eigen::MatrixXd M(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) throw std::invalid_argument("matrix must be square");
    for (std::size_t j = 0; j < d; ++j) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return M;
}

Eigen::MatrixXd load_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open lattice file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_matrix(ss.str());
}

ParsedShift parse_shift(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tok;
  std::string t;
  while (in >> t) tok.push_back(t);
  if (tok.empty()) throw std::invalid_argument("empty shift");
  ParsedShift out;
  if (tok[0] == "irrational") {
    out.rational = false;
    for (std::size_t i = 1; i < tok.size(); ++i) out.value.push_back(to_double(tok[i]));
    if (out.value.size() < 2) throw std::invalid_argument("irrational shift needs at least two components");
    return out;
  }
  std::vector<std::int64_t> num, den;
  for (const auto& s : tok) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      num.push_back(to_int(s));
      den.push_back(1);
    } else {
      num.push_back(to_int(s.substr(0, slash)));
      den.push_back(to_int(s.substr(slash + 1)));
      if (den.back() <= 0) throw std::invalid_argument("denominators must be positive");
    }
  }
  if (num.size() < 2) throw std::invalid_argument("shift needs at least two components");
  std::int64_t q = 1;
  for (auto d : den) q = std::lcm(q, d);
  out.q = q;
  for (std::size_t i = 0; i < num.size(); ++i) out.p.push_back(num[i] * (q / den[i]));
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::istringstream in(text);
    std::string s;
    while (std::getline(in, s, ':')) parts.push_back(to_double(trim(s)));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
      throw std::invalid_argument("grid must be a:b:step with a <= b and step > 0");
    const auto steps = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long i = 0; i <= steps; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
  }
  std::istringstream in(text);
  std::string s;
  while (std::getline(in, s, ',')) {
    s = trim(s);
    if (!s.empty()) out.push_back(to_double(s));
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string s;
  while (std::getline(in, s, ',')) {
    s = trim(s);
    if (!s.empty()) out.push_back(static_cast<int>(to_int(s)));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::string norm = text;
  for (char& c : norm)
    if (c == ',') c = ' ';
  std::istringstream in(norm);
  std::string s;
  while (in >> s) out.push_back(to_double(s));
  return out;
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  if (x == std::floor(x) && std::abs(x) < 1e15) {
    const auto r = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(x));
    return std::string(buf, r.ptr);
  }
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_csv(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) f << ',';
      f << format_double(row[i]);
    }
    f << '\n';
  }
}

}  // namespace llg
