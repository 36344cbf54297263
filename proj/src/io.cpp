#include "latkde/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "latkde/errors.hpp"

namespace latkde {
namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// Reads "key v1 v2 ..." and returns the values as strings.
std::vector<std::string> read_keyed_line(std::istream& is, std::string_view key, std::size_t& line_no) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("estimator: missing '" + std::string(key) + "' line", line_no + 1, 1);
  ++line_no;
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key) throw ParseError("estimator: expected '" + std::string(key) + "'", line_no, 1);
  std::vector<std::string> vals;
  std::string v;
  while (ls >> v) vals.push_back(v);
  return vals;
}

double to_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  if (!parse_double(s, v)) throw ParseError("estimator: not a number: " + s, line_no, 1);
  return v;
}

std::uint64_t to_uint(const std::string& s, std::size_t line_no) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("estimator: not a non-negative integer: " + s, line_no, 1);
  }
  return v;
}

}  // namespace

void write_estimator(std::ostream& os, const DensityEstimator& est) {
  os << "latkde-estimator 1\n";
  os << "d " << est.dim() << '\n';
  os << "alpha " << fmt17(est.kernel().alpha()) << '\n';
  os << "N " << est.rule().size() << '\n';
  os << "lambda " << fmt17(est.lambda()) << '\n';
  os << 'z';
  for (auto z : est.rule().generator()) os << ' ' << z;
  os << "\ngamma";
  for (double g : est.kernel().weights().gamma()) os << ' ' << fmt17(g);
  os << "\nc";
  for (double c : est.coefficients()) os << ' ' << fmt17(c);
  os << '\n';
}

DensityEstimator read_estimator(std::istream& is) {
  std::size_t line_no = 0;
  const auto magic = read_keyed_line(is, "latkde-estimator", line_no);
  if (magic.size() != 1 || magic[0] != "1") throw ParseError("estimator: unsupported format version", 1, 1);
  const auto d_vals = read_keyed_line(is, "d", line_no);
  if (d_vals.size() != 1) throw ParseError("estimator: 'd' takes one value", line_no, 1);
  const std::size_t d = to_uint(d_vals[0], line_no);
  const auto a_vals = read_keyed_line(is, "alpha", line_no);
  if (a_vals.size() != 1) throw ParseError("estimator: 'alpha' takes one value", line_no, 1);
  const double alpha = to_double(a_vals[0], line_no);
  const auto n_vals = read_keyed_line(is, "N", line_no);
  if (n_vals.size() != 1) throw ParseError("estimator: 'N' takes one value", line_no, 1);
  const std::uint64_t n = to_uint(n_vals[0], line_no);
  const auto l_vals = read_keyed_line(is, "lambda", line_no);
  if (l_vals.size() != 1) throw ParseError("estimator: 'lambda' takes one value", line_no, 1);
  const double lambda = to_double(l_vals[0], line_no);

  const auto z_vals = read_keyed_line(is, "z", line_no);
  if (z_vals.size() != d) throw ParseError("estimator: 'z' must have d entries", line_no, 1);
  std::vector<std::uint64_t> z;
  for (const auto& s : z_vals) z.push_back(to_uint(s, line_no));

  const auto g_vals = read_keyed_line(is, "gamma", line_no);
  if (g_vals.size() != d) throw ParseError("estimator: 'gamma' must have d entries", line_no, 1);
  std::vector<double> gamma;
  for (const auto& s : g_vals) gamma.push_back(to_double(s, line_no));

  const auto c_vals = read_keyed_line(is, "c", line_no);
  if (c_vals.size() != n) throw ParseError("estimator: 'c' must have N entries", line_no, 1);
  std::vector<double> c;
  for (const auto& s : c_vals) c.push_back(to_double(s, line_no));

  return DensityEstimator(LatticeRule(n, std::move(z)), KorobovKernel(alpha, ProductWeights(std::move(gamma))),
                          lambda, std::move(c));
}

void write_points_csv(std::ostream& os, const PointSet& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.dim(); ++j) os << (j ? "," : "") << fmt17(points.at(i, j));
    os << '\n';
  }
}

PointSet read_points_csv(std::istream& is) {
  std::vector<double> rows;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t col = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string_view field(line.data() + pos,
                                   (comma == std::string::npos ? line.size() : comma) - pos);
      ++col;
      double v = 0.0;
      if (!parse_double(field, v)) throw ParseError("CSV: not a number", line_no, col);
      if (!(v >= 0.0 && v <= 1.0)) throw ParseError("CSV: value outside [0,1]", line_no, col);
      rows.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (dim == 0) {
      dim = col;
    } else if (col != dim) {
      throw ParseError("CSV: expected " + std::to_string(dim) + " columns, found " + std::to_string(col),
                       line_no, std::min(col, dim) + 1);
    }
  }
  if (dim == 0) throw ParseError("CSV: no data rows", line_no == 0 ? 1 : line_no, 1);
  return PointSet::from_rows(dim, rows);
}

}  // namespace latkde
