#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "latkde/point_set.hpp"

namespace latkde {

/// Primitive polynomials and initial direction numbers in the Joe-Kuo text layout:
/// a header line, then one line per dimension d = 2, 3, ... holding "d s a m_1 .. m_s".
/// Dimension 1 is implicit (all m_i = 1).
class DirectionTable {
 public:
  struct Entry {
    unsigned degree;                 // s
    std::uint32_t coefficients;      // a, the interior polynomial bits
    std::vector<std::uint32_t> m;    // initial direction numbers, odd, m_i < 2^i
  };

  /// Reads entries for dimensions 2..max_dim. Missing file / bad line -> ConfigError.
  static DirectionTable load(const std::filesystem::path& path, std::size_t max_dim);

  /// Number of dimensions covered, including the implicit first one.
  std::size_t max_dim() const noexcept { return entries_.size() + 1; }
  const Entry& entry(std::size_t dim_index) const { return entries_.at(dim_index - 1); }

 private:
  std::vector<Entry> entries_;
};

/// Data directory: $LATKDE_DATA_DIR if set, otherwise the repository's data/ directory.
std::filesystem::path default_data_dir();
std::filesystem::path default_direction_table_path();

/// Base-2 Sobol' sequence (32-bit, Gray-code order). The first emitted point is the one with
/// index 1, (1/2, ..., 1/2); the all-zero point of index 0 is skipped.
class SobolSequence {
 public:
  SobolSequence(const DirectionTable& table, std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  void next(std::span<double> out);

 private:
  std::size_t dim_;
  std::vector<std::uint32_t> directions_;  // dim * 32, V[j][bit]
  std::vector<std::uint32_t> state_;
  std::uint64_t index_ = 0;
};

/// The first L points of the sequence in dimension d (shift points of the MISE grid).
/// d beyond the table -> ConfigError.
PointSet generate_shifts(std::size_t count, std::size_t dim, const DirectionTable& table);
PointSet generate_shifts(std::size_t count, std::size_t dim);

}  // namespace latkde
