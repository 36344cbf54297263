#include "latkde/qmc.hpp"

#include <bit>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "latkde/errors.hpp"

namespace latkde {

namespace {
constexpr unsigned kBits = 32;
constexpr std::size_t kTableDims = 21201;
}  // namespace

DirectionTable DirectionTable::load(const std::filesystem::path& path, std::size_t max_dim) {
  if (max_dim > kTableDims) {
    throw ConfigError("Sobol direction table covers at most " + std::to_string(kTableDims) +
                      " dimensions");
  }
  DirectionTable table;
  if (max_dim <= 1) return table;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open direction-number table: " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::size_t expected = 2;
  while (table.max_dim() < max_dim && std::getline(in, line)) {
    std::istringstream ls(line);
    std::size_t d = 0;
    Entry e{};
    if (!(ls >> d >> e.degree >> e.coefficients) || d != expected || e.degree == 0 ||
        e.degree > kBits) {
      throw ConfigError("malformed direction-number line for dimension " + std::to_string(expected));
    }
    e.m.resize(e.degree);
    for (auto& v : e.m) {
      if (!(ls >> v)) throw ConfigError("truncated direction numbers for dimension " + std::to_string(d));
    }
    table.entries_.push_back(std::move(e));
    ++expected;
  }
  if (table.max_dim() < max_dim) {
    throw ConfigError("direction-number table ends at dimension " + std::to_string(table.max_dim()));
  }
  return table;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("LATKDE_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return LATKDE_DEFAULT_DATA_DIR;
}

std::filesystem::path default_direction_table_path() {
  return default_data_dir() / "new-joe-kuo-6.21201.txt";
}

SobolSequence::SobolSequence(const DirectionTable& table, std::size_t dim)
    : dim_(dim), directions_(dim * kBits), state_(dim, 0) {
  if (dim == 0) throw ConfigError("Sobol sequence: dimension must be at least 1");
  if (dim > table.max_dim()) {
    throw ConfigError("Sobol sequence: dimension " + std::to_string(dim) +
                      " exceeds the direction table (" + std::to_string(table.max_dim()) + ")");
  }
  for (unsigned i = 0; i < kBits; ++i) directions_[i] = 1u << (kBits - 1 - i);
  for (std::size_t j = 1; j < dim; ++j) {
    const auto& e = table.entry(j);
    std::uint32_t* v = &directions_[j * kBits];
    const unsigned s = e.degree;
    for (unsigned i = 0; i < s && i < kBits; ++i) v[i] = e.m[i] << (kBits - 1 - i);
    for (unsigned i = s; i < kBits; ++i) {
      std::uint32_t value = v[i - s] ^ (v[i - s] >> s);
      for (unsigned k = 1; k < s; ++k) {
        if ((e.coefficients >> (s - 1 - k)) & 1u) value ^= v[i - k];
      }
      v[i] = value;
    }
  }
}

void SobolSequence::next(std::span<double> out) {
  if (out.size() != dim_) throw DomainError("Sobol sequence: output dimension mismatch");
  // Gray-code update from index_ to index_ + 1 flips the direction of the lowest zero bit.
  const unsigned c = static_cast<unsigned>(std::countr_one(index_));
  if (c >= kBits) throw ConfigError("Sobol sequence exhausted (2^32 points)");
  ++index_;
  constexpr double scale = 1.0 / 4294967296.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    state_[j] ^= directions_[j * kBits + c];
    out[j] = static_cast<double>(state_[j]) * scale;
  }
}

PointSet generate_shifts(std::size_t count, std::size_t dim, const DirectionTable& table) {
  if (count == 0) throw ConfigError("generate_shifts: count must be at least 1");
  SobolSequence seq(table, dim);
  PointSet ps(dim, count);
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < count; ++i) {
    seq.next(p);
    for (std::size_t j = 0; j < dim; ++j) ps.at(i, j) = p[j];
  }
  return ps;
}

PointSet generate_shifts(std::size_t count, std::size_t dim) {
  if (dim > kTableDims) {
    throw ConfigError("Sobol sequence: dimension " + std::to_string(dim) + " exceeds the table");
  }
  return generate_shifts(count, dim, DirectionTable::load(default_direction_table_path(), dim));
}

}  // namespace latkde
