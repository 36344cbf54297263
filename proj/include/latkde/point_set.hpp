#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace latkde {

/// Points in [0,1]^d stored coordinate-major: coordinate j of all points is contiguous.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::size_t count) : dim_(dim), count_(count), data_(dim * count) {}

  /// Builds from row-major data (count rows of dim values).
  static PointSet from_rows(std::size_t dim, std::span<const double> rows);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  std::span<double> coordinate(std::size_t j) noexcept { return {data_.data() + j * count_, count_}; }
  std::span<const double> coordinate(std::size_t j) const noexcept {
    return {data_.data() + j * count_, count_};
  }

  double& at(std::size_t i, std::size_t j) noexcept { return data_[j * count_ + i]; }
  double at(std::size_t i, std::size_t j) const noexcept { return data_[j * count_ + i]; }

  std::vector<double> point(std::size_t i) const;
  void copy_point(std::size_t i, std::span<double> out) const;

  /// Drops all points past the first `count` ones (keeps capacity semantics simple: reallocates).
  void truncate(std::size_t count);

 private:
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::vector<double> data_;
};

}  // namespace latkde
