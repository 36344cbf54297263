#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "latkde/kernels.hpp"
#include "latkde/point_set.hpp"

namespace latkde {

bool is_prime(std::uint64_t n);

/// Rank-1 lattice rule x_k = {k z / N}, k = 1..N, with N prime and 1 <= z_j <= N-1.
///
/// Point k = N is the origin. Differences of lattice points are lattice points,
/// x_j - x_k = x_{(j-k) mod N} (mod 1), so kernel matrices on the rule are circulant.
class LatticeRule {
 public:
  /// N not prime, empty z or z_j outside [1, N-1] -> DomainError.
  LatticeRule(std::uint64_t n, std::vector<std::uint64_t> z);

  std::uint64_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return z_.size(); }
  std::span<const std::uint64_t> generator() const noexcept { return z_; }

  /// The N points in the order k = 1..N.
  PointSet points() const;

  /// Point {k z / N} for any integer k >= 0 (k = 0 and k = N give the origin).
  void point(std::uint64_t k, std::span<double> out) const;
  std::vector<double> point(std::uint64_t k) const;

  /// All lag points {m z / N}, m = 0..N-1, i.e. the origin followed by points 1..N-1.
  PointSet lag_points() const;

  friend bool operator==(const LatticeRule&, const LatticeRule&) = default;

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> z_;
};

/// Squared worst-case integration error of the lattice rule (N, z) in the Korobov space with
/// smoothness alpha (2 or 4) and product weights gamma_1..gamma_s, s = z.size():
///
///     E^2(z) = -1 + (1/N) sum_{k=1}^{N} prod_{j<=s} (1 + gamma_j c_alpha B_alpha({k z_j / N})).
double cbc_criterion(std::uint64_t n, std::span<const std::uint64_t> z, int alpha,
                     const ProductWeights& weights);

struct CbcResult {
  std::vector<std::uint64_t> z;
  /// criterion[s] is E^2 of the first s+1 components after step s.
  std::vector<double> criterion;
};

/// Component-by-component construction: z_1 = 1, then each z_s in 1..N-1 minimizes E^2 of
/// (z_1..z_s) given the earlier components; ties go to the smallest candidate.
/// N not prime -> DomainError; alpha other than 2 or 4 -> ConfigError.
CbcResult cbc_construct(std::uint64_t n, std::size_t dim, int alpha, const ProductWeights& weights);

/// Plain-text generating vector: "N d" on the first line, the d entries of z on the second.
void write_generating_vector(std::ostream& os, const LatticeRule& rule);
LatticeRule read_generating_vector(std::istream& is);

}  // namespace latkde
