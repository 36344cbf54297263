#include "latkde/point_set.hpp"

#include <algorithm>

#include "latkde/errors.hpp"

namespace latkde {

PointSet PointSet::from_rows(std::size_t dim, std::span<const double> rows) {
  if (dim == 0 || rows.size() % dim != 0) {
    throw DomainError("PointSet::from_rows: row data length is not a multiple of the dimension");
  }
  PointSet ps(dim, rows.size() / dim);
  for (std::size_t i = 0; i < ps.count_; ++i) {
    for (std::size_t j = 0; j < dim; ++j) ps.at(i, j) = rows[i * dim + j];
  }
  return ps;
}

std::vector<double> PointSet::point(std::size_t i) const {
  std::vector<double> p(dim_);
  copy_point(i, p);
  return p;
}

void PointSet::copy_point(std::size_t i, std::span<double> out) const {
  for (std::size_t j = 0; j < dim_; ++j) out[j] = at(i, j);
}

void PointSet::truncate(std::size_t count) {
  if (count >= count_) return;
  PointSet smaller(dim_, count);
  for (std::size_t j = 0; j < dim_; ++j) {
    const auto src = coordinate(j);
    std::copy_n(src.begin(), count, smaller.coordinate(j).begin());
  }
  *this = std::move(smaller);
}

}  // namespace latkde
