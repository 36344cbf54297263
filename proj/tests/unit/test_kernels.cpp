#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "latkde/errors.hpp"
#include "latkde/kernels.hpp"
#include "latkde/qmc.hpp"
#include "latkde/sampling.hpp"

using namespace latkde;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("kernels") {

TEST_CASE("diagonal values") {
  const KorobovKernel k2(2.0, ProductWeights::constant(1, 1.0));
  const KorobovKernel k4(4.0, ProductWeights::constant(1, 1.0));
  const std::vector<double> x{0.3};
  CHECK(k2(x, x) == Approx(1.0 + pi * pi / 3.0).epsilon(1e-14));
  CHECK(k2(x, x) == Approx(4.289868133696453).epsilon(1e-14));
  CHECK(k4(x, x) == Approx(1.0 + std::pow(pi, 4) / 45.0).epsilon(1e-14));
  CHECK(k2.l2(x, x) == Approx(3.164646467422276).epsilon(1e-14));
}

TEST_CASE("L2 kernel at half lag") {
  // sum_{h != 0} (-1)^h / h^4 = -7 pi^4 / 360, so K~(0.5) = 1 - 7 pi^4 / 360.
  const KorobovKernel k(2.0, ProductWeights::constant(1, 1.0));
  const std::vector<double> x{0.75}, y{0.25};
  CHECK(k.l2(x, y) == Approx(1.0 - 7.0 * std::pow(pi, 4) / 360.0).epsilon(1e-14));
  CHECK(k.l2(x, y) == Approx(-0.8940656589944915).epsilon(1e-14));
}

TEST_CASE("small weights give the constant kernel") {
  const KorobovKernel k(2.0, ProductWeights::constant(4, 1e-14));
  const auto pts = testing::random_points(4, 20, 3);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    CHECK(k(pts.point(i), pts.point(i + 1)) == Approx(1.0).epsilon(1e-12));
    CHECK(k.l2(pts.point(i), pts.point(i + 1)) == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dimension mismatch") {
  const KorobovKernel k(2.0, ProductWeights::constant(2, 1.0));
  const std::vector<double> x{0.1}, y{0.1, 0.2};
  CHECK_THROWS_AS(k(x, y), DomainError);
  CHECK_THROWS_AS(k.l2(y, x), DomainError);
}

TEST_CASE("invalid construction") {
  CHECK_THROWS_AS(KorobovKernel(1.0, ProductWeights::constant(1, 1.0)), ConfigError);
  CHECK_THROWS_AS(ProductWeights({1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(ProductWeights({1.0, -2.0}), ConfigError);
  const KorobovKernel k(3.0, ProductWeights::constant(1, 1.0));
  CHECK_FALSE(k.has_closed_form());
  CHECK_THROWS_AS(k.lag_kernel(), ConfigError);
}

TEST_CASE("symmetry") {
  for (double alpha : {2.0, 4.0}) {
    const KorobovKernel k(alpha, ProductWeights::power_law(5, alpha));
    const auto pts = testing::random_points(5, 2000, 17);
    for (std::size_t i = 0; i < pts.size(); i += 2) {
      const auto x = pts.point(i), y = pts.point(i + 1);
      CHECK(k(x, y) == k(y, x));
      CHECK(k.l2(x, y) == k.l2(y, x));
    }
  }
}

TEST_CASE("positive semidefinite Gram matrices") {
  for (std::size_t d = 1; d <= 4; ++d) {
    const KorobovKernel k(2.0, ProductWeights::power_law(d, 2.0));
    for (int rep = 0; rep < 50; ++rep) {
      const auto pts = testing::random_points(d, 20, 1000 * d + rep);
      Eigen::MatrixXd g(20, 20);
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) g(i, j) = k(pts.point(i), pts.point(j));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10 * g.diagonal().maxCoeff());
    }
  }
}

TEST_CASE("closed form against a long Fourier series") {
  for (double alpha : {2.0, 4.0}) {
    for (std::size_t d : {1u, 3u}) {
      const KorobovKernel k(alpha, ProductWeights::power_law(d, alpha));
      const auto pts = testing::random_points(d, 20, 5 + d);
      for (std::size_t i = 0; i < pts.size(); i += 2) {
        const auto x = pts.point(i), y = pts.point(i + 1);
        CHECK(std::abs(k(x, y) - testing::series_kernel(k.weights().gamma(), alpha, x, y, 100000)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("non-even alpha uses the truncated series") {
  const KorobovKernel k(3.0, ProductWeights::constant(2, 0.5), 2000);
  const std::vector<double> x{0.1, 0.7}, y{0.6, 0.2};
  CHECK(k(x, y) == Approx(testing::series_kernel(k.weights().gamma(), 3.0, x, y, 2000)).epsilon(1e-13));
  // 2 alpha = 6 has the B_6 closed form, so K~ is exact.
  CHECK(std::abs(k.l2(x, y) - testing::series_kernel(k.weights().squared().gamma(), 6.0, x, y, 20000)) < 1e-12);
}

TEST_CASE("normalization over a Sobol' point set") {
  const std::size_t q = 1u << 16;
  for (double alpha : {2.0, 4.0}) {
    const std::size_t d = 3;
    const KorobovKernel k(alpha, ProductWeights::power_law(d, alpha));
    const PointSet u = generate_shifts(q, d);
    const std::vector<double> x{0.12, 0.5, 0.93};
    // K(x, u) = g(u - x).
    const double mean = k.lag_kernel().shifted_sum(u, x) / static_cast<double>(q);
    CHECK(std::abs(mean - 1.0) <= 5e-3);
  }
}

TEST_CASE("L2 kernel equals a kernel with doubled smoothness and squared weights") {
  const ProductWeights w({0.9, 0.4, 0.25});
  const KorobovKernel k(2.0, w);
  const KorobovKernel k4(4.0, w.squared());
  const auto pts = testing::random_points(3, 100, 23);
  for (std::size_t i = 0; i < pts.size(); i += 2) {
    const auto x = pts.point(i), y = pts.point(i + 1);
    CHECK(k.l2(x, y) == Approx(k4(x, y)).epsilon(1e-14));
  }
}

TEST_CASE("fourier weight") {
  const KorobovKernel k(2.0, ProductWeights({1.0, 0.25}));
  const std::vector<int> h0{0, 0}, h1{2, 0}, h2{-1, 3};
  CHECK(k.fourier_weight(h0) == 1.0);
  CHECK(k.fourier_weight(h1) == Approx(0.25));
  CHECK(k.fourier_weight(h2) == Approx(1.0 * 0.25 / 9.0));
}

TEST_CASE("mean embedding of simple coefficient sets") {
  const KorobovKernel k(2.0, ProductWeights({0.8}));
  CHECK_THROWS_AS(MeanEmbedding(k, FourierCoefficients{}), DomainError);
  CHECK_THROWS_AS(MeanEmbedding(k, FourierCoefficients{{{0}, 0.5}}), DomainError);

  const MeanEmbedding one(k, FourierCoefficients{{{0}, 1.0}});
  const std::vector<double> x{0.37};
  CHECK(one(x) == Approx(1.0).epsilon(1e-15));

  const double c = 0.2;
  const MeanEmbedding cos1(k, FourierCoefficients{{{0}, 1.0}, {{1}, c}, {{-1}, c}});
  for (double t : {0.0, 0.1, 0.45, 0.8}) {
    const std::vector<double> xt{t};
    CHECK(cos1(xt) == Approx(1.0 + 2.0 * c * 0.8 * std::cos(2.0 * pi * t)).epsilon(1e-14));
    CHECK(std::abs(cos1.evaluate_complex(xt).imag()) <= 1e-12);
  }
}

TEST_CASE("mean embedding of the test density against quadrature") {
  for (double alpha : {2.0, 4.0}) {
    const KorobovKernel k(alpha, ProductWeights::power_law(1, alpha));
    const TestDensity f(std::vector<double>{1.0});
    const MeanEmbedding emb(k, f.fourier_coefficients(64));
    const BernoulliProduct closed = f.mean_embedding(k);
    const int q = 1000000;
    for (double x0 : {0.0, 0.21, 0.5, 0.9}) {
      const std::vector<double> x{x0};
      double s = 0.0;
      std::vector<double> y(1);
      for (int i = 0; i < q; ++i) {
        y[0] = (i + 0.5) / q;
        s += k(x, y) * f(y);
      }
      s /= q;
      CHECK(std::abs(emb(x) - s) <= 1e-8);
      CHECK(std::abs(closed(x) - s) <= 1e-8);
    }
  }
}

TEST_CASE("closed-form mean embedding against the Fourier sum in d = 3") {
  const KorobovKernel k(2.0, ProductWeights::power_law(3, 2.0));
  const TestDensity f(3);
  const MeanEmbedding emb(k, f.fourier_coefficients(24));
  const BernoulliProduct closed = f.mean_embedding(k);
  const auto pts = testing::random_points(3, 10, 41);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto x = pts.point(i);
    CHECK(std::abs(emb(x) - closed(x)) <= 1e-9);
  }
}

}  // TEST_SUITE
