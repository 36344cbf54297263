#include "latkde/bernoulli_product.hpp"

#include "latkde/errors.hpp"
#include "latkde/simd.hpp"
#include "latkde/special_functions.hpp"

namespace latkde {

BernoulliProduct::BernoulliProduct(int degree, std::vector<double> scales)
    : degree_(degree), scales_(std::move(scales)) {
  const auto coeffs = bernoulli_poly(degree).coefficients();
  poly_.assign(coeffs.begin(), coeffs.end());
}

double BernoulliProduct::factor(std::size_t j, double t) const {
  return 1.0 + scales_[j] * bernoulli_poly(degree_)(fractional_part(t));
}

double BernoulliProduct::operator()(std::span<const double> t) const {
  if (t.size() != scales_.size()) throw DomainError("BernoulliProduct: dimension mismatch");
  double prod = 1.0;
  for (std::size_t j = 0; j < t.size(); ++j) prod *= factor(j, t[j]);
  return prod;
}

namespace {

simd::ProductArgs make_args(const BernoulliProduct& g, const PointSet& points,
                            std::span<const double> offset) {
  if (points.dim() != g.dim() || offset.size() != g.dim()) {
    throw DomainError("BernoulliProduct: dimension mismatch");
  }
  const double* base = points.empty() ? nullptr : points.coordinate(0).data();
  return {g.degree(), g.poly(), g.scales(), base, points.size(), offset};
}

}  // namespace

double BernoulliProduct::shifted_sum(const PointSet& points, std::span<const double> offset) const {
  const auto args = make_args(*this, points, offset);
  if (args.count == 0) return 0.0;
  return simd::ops(simd::active_isa()).shifted_sum(args);
}

void BernoulliProduct::shifted_eval(const PointSet& points, std::span<const double> offset,
                                    std::span<double> out) const {
  const auto args = make_args(*this, points, offset);
  if (out.size() != args.count) throw DomainError("BernoulliProduct: output size mismatch");
  if (args.count == 0) return;
  simd::ops(simd::active_isa()).shifted_eval(args, out.data());
}

}  // namespace latkde
