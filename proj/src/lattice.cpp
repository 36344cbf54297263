#include "latkde/lattice.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "latkde/errors.hpp"
#include "latkde/special_functions.hpp"

namespace latkde {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

LatticeRule::LatticeRule(std::uint64_t n, std::vector<std::uint64_t> z) : n_(n), z_(std::move(z)) {
  if (!is_prime(n_)) throw DomainError("N must be prime (got " + std::to_string(n_) + ")");
  if (z_.empty()) throw DomainError("generating vector must have at least one component");
  for (std::uint64_t zj : z_) {
    if (zj < 1 || zj >= n_) {
      throw DomainError("generating vector entries must lie in [1, N-1] (got " + std::to_string(zj) + ")");
    }
  }
}

void LatticeRule::point(std::uint64_t k, std::span<double> out) const {
  if (out.size() != dim()) throw DomainError("LatticeRule::point: dimension mismatch");
  const double inv = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < dim(); ++j) {
    // Reduce in integers first so that every coordinate is exactly r/N with r < N.
    const std::uint64_t r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k % n_) * z_[j]) % n_);
    out[j] = static_cast<double>(r) * inv;
  }
}

std::vector<double> LatticeRule::point(std::uint64_t k) const {
  std::vector<double> p(dim());
  point(k, p);
  return p;
}

PointSet LatticeRule::points() const {
  PointSet ps(dim(), n_);
  std::vector<double> p(dim());
  for (std::uint64_t k = 1; k <= n_; ++k) {
    point(k, p);
    for (std::size_t j = 0; j < dim(); ++j) ps.at(k - 1, j) = p[j];
  }
  return ps;
}

PointSet LatticeRule::lag_points() const {
  PointSet ps(dim(), n_);
  std::vector<double> p(dim());
  for (std::uint64_t m = 0; m < n_; ++m) {
    point(m, p);
    for (std::size_t j = 0; j < dim(); ++j) ps.at(m, j) = p[j];
  }
  return ps;
}

namespace {

void check_cbc_args(std::uint64_t n, int alpha) {
  if (!is_prime(n)) throw DomainError("N must be prime (got " + std::to_string(n) + ")");
  if (alpha != 2 && alpha != 4) {
    throw ConfigError("CBC supports alpha in {2, 4} (got " + std::to_string(alpha) + ")");
  }
}

// omega[r] = B_alpha(r/N), mirrored so that omega[r] == omega[N-r] bit for bit. This makes the
// criterion exactly symmetric under z -> N - z and the smallest-index tie-break deterministic.
std::vector<double> bernoulli_table(std::uint64_t n, int alpha) {
  std::vector<double> omega(n);
  const auto& b = bernoulli_poly(alpha);
  for (std::uint64_t r = 0; r <= n / 2; ++r) {
    omega[r] = b(static_cast<double>(r) / static_cast<double>(n));
    if (r != 0) omega[n - r] = omega[r];
  }
  return omega;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

// (1/N) sum_k running[k] * (1 + scale * omega[k z mod N]) - 1, with running[k] indexed by k mod N.
double extended_criterion(std::span<const double> running, std::span<const double> omega,
                          double scale, std::uint64_t z) {
  const std::uint64_t n = running.size();
  double sum = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) sum += running[k] * (1.0 + scale * omega[mulmod(k, z, n)]);
  return sum / static_cast<double>(n) - 1.0;
}

}  // namespace

double cbc_criterion(std::uint64_t n, std::span<const std::uint64_t> z, int alpha,
                     const ProductWeights& weights) {
  check_cbc_args(n, alpha);
  if (z.size() > weights.dim()) throw DomainError("cbc_criterion: more components than weights");
  const auto omega = bernoulli_table(n, alpha);
  std::vector<double> running(n, 1.0);
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double scale = bernoulli_series_scale(alpha, weights[j]);
    for (std::uint64_t k = 0; k < n; ++k) running[k] *= 1.0 + scale * omega[mulmod(k, z[j], n)];
  }
  double sum = 0.0;
  for (double v : running) sum += v;
  return sum / static_cast<double>(n) - 1.0;
}

CbcResult cbc_construct(std::uint64_t n, std::size_t dim, int alpha, const ProductWeights& weights) {
  check_cbc_args(n, alpha);
  if (dim == 0) throw DomainError("cbc_construct: dimension must be at least 1");
  if (weights.dim() < dim) throw DomainError("cbc_construct: fewer weights than dimensions");

  const auto omega = bernoulli_table(n, alpha);
  std::vector<double> running(n, 1.0);
  CbcResult result;
  for (std::size_t s = 0; s < dim; ++s) {
    const double scale = bernoulli_series_scale(alpha, weights[s]);
    std::uint64_t best_z = 1;
    double best = extended_criterion(running, omega, scale, 1);
    if (s > 0) {
      for (std::uint64_t cand = 2; cand < n; ++cand) {
        const double e = extended_criterion(running, omega, scale, cand);
        if (e < best) {
          best = e;
          best_z = cand;
        }
      }
    }
    for (std::uint64_t k = 0; k < n; ++k) running[k] *= 1.0 + scale * omega[mulmod(k, best_z, n)];
    result.z.push_back(best_z);
    result.criterion.push_back(best);
  }
  return result;
}

void write_generating_vector(std::ostream& os, const LatticeRule& rule) {
  os << rule.size() << ' ' << rule.dim() << '\n';
  for (std::size_t j = 0; j < rule.dim(); ++j) os << (j ? " " : "") << rule.generator()[j];
  os << '\n';
}

LatticeRule read_generating_vector(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("generating vector: missing header line", 1, 1);
  std::istringstream header(line);
  std::uint64_t n = 0;
  std::size_t d = 0;
  if (!(header >> n >> d) || d == 0) throw ParseError("generating vector: expected \"N d\"", 1, 1);
  if (!std::getline(is, line)) throw ParseError("generating vector: missing z line", 2, 1);
  std::istringstream body(line);
  std::vector<std::uint64_t> z;
  std::uint64_t v = 0;
  while (body >> v) z.push_back(v);
  if (z.size() != d) {
    throw ParseError("generating vector: expected " + std::to_string(d) + " entries, found " +
                         std::to_string(z.size()),
                     2, 1);
  }
  return LatticeRule(n, std::move(z));
}

}  // namespace latkde
