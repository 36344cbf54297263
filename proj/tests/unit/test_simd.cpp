#include <doctest.h>

#include <cmath>
#include <vector>

#include "latkde/bernoulli_product.hpp"
#include "latkde/errors.hpp"
#include "latkde/rng.hpp"
#include "latkde/simd.hpp"

using namespace latkde;

namespace {

PointSet random_points(std::size_t d, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  PointSet p(d, n);
  for (std::size_t j = 0; j < d; ++j)
    for (auto& v : p.coordinate(j)) v = rng.uniform();
  return p;
}

// Restores the process-wide choice after a test case switches it.
struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::set_active_isa(saved); }
};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar is always available") {
  CHECK(simd::isa_available(simd::Isa::scalar));
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
  CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");
}

TEST_CASE("unavailable variant is rejected") {
  if (simd::isa_available(simd::Isa::avx2)) return;
  CHECK_THROWS_AS(simd::ops(simd::Isa::avx2), ConfigError);
  CHECK_THROWS_AS(simd::set_active_isa(simd::Isa::avx2), ConfigError);
}

TEST_CASE("avx2 matches the scalar reference") {
  if (!simd::isa_available(simd::Isa::avx2)) {
    MESSAGE("avx2 not available on this machine; equivalence not exercised");
    return;
  }
  const auto& ref = simd::ops(simd::Isa::scalar);
  const auto& vec = simd::ops(simd::Isa::avx2);
  RandomStream rng(7);
  for (int degree : {2, 4, 6, 8}) {
    const BernoulliProduct proto(degree, {1.0});
    const auto poly = proto.poly();
    // Counts straddle the 8-wide unrolled body and the scalar tail.
    for (std::size_t count : {1u, 3u, 4u, 7u, 8u, 9u, 31u, 1000u, 1003u}) {
      for (std::size_t d : {1u, 2u, 6u}) {
        const PointSet pts = random_points(d, count, 100 + count + d);
        std::vector<double> scales(d), offset(d);
        for (std::size_t j = 0; j < d; ++j) {
          scales[j] = 4.0 * rng.uniform() - 2.0;
          offset[j] = 3.0 * rng.uniform() - 1.5;
        }
        std::vector<double> pts_flat(d * count);
        for (std::size_t j = 0; j < d; ++j)
          for (std::size_t i = 0; i < count; ++i) pts_flat[j * count + i] = pts.at(i, j);
        const simd::ProductArgs args{degree, poly, scales, pts_flat.data(), count, offset};

        const double s_ref = ref.shifted_sum(args);
        const double s_vec = vec.shifted_sum(args);
        CHECK(std::abs(s_ref - s_vec) <= 1e-12 * (1.0 + std::abs(s_ref)) * count);

        std::vector<double> e_ref(count), e_vec(count);
        ref.shifted_eval(args, e_ref.data());
        vec.shifted_eval(args, e_vec.data());
        double worst = 0.0;
        for (std::size_t i = 0; i < count; ++i)
          worst = std::max(worst, std::abs(e_ref[i] - e_vec[i]) / (1.0 + std::abs(e_ref[i])));
        CHECK(worst <= 1e-13);
      }
    }
  }
}

TEST_CASE("BernoulliProduct batch paths agree with pointwise evaluation under both variants") {
  IsaGuard guard;
  const BernoulliProduct g(4, {0.7, -0.3, 1.9});
  const PointSet pts = random_points(3, 257, 11);
  const std::vector<double> offset{0.25, -0.6, 1.3};
  double direct = 0.0;
  std::vector<double> t(3), expected(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) t[j] = pts.at(i, j) - offset[j];
    expected[i] = g(t);
    direct += expected[i];
  }
  for (auto isa : {simd::Isa::scalar, simd::Isa::avx2}) {
    if (!simd::isa_available(isa)) continue;
    simd::set_active_isa(isa);
    CAPTURE(simd::isa_name(isa));
    CHECK(g.shifted_sum(pts, offset) == doctest::Approx(direct).epsilon(1e-13));
    std::vector<double> out(pts.size());
    g.shifted_eval(pts, offset, out);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(expected[i]).epsilon(1e-13));
  }
}

}  // TEST_SUITE
