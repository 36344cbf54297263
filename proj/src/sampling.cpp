#include "latkde/sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "latkde/errors.hpp"
#include "latkde/special_functions.hpp"

namespace latkde {
namespace {

std::vector<double> default_amplitudes(std::size_t dim) {
  if (dim == 0) throw ConfigError("TestDensity: dimension must be at least 1");
  std::vector<double> a(dim);
  for (std::size_t j = 0; j < dim; ++j) a[j] = std::pow(static_cast<double>(j + 1), -4.0);
  return a;
}

// B_4 ranges over [-1/30, 7/240] on [0,1].
constexpr double kB4Min = -1.0 / 30.0;
constexpr double kB4Max = 7.0 / 240.0;

}  // namespace

TestDensity::TestDensity(std::size_t dim) : TestDensity(default_amplitudes(dim)) {}

TestDensity::TestDensity(std::vector<double> amplitudes)
    : a_(std::move(amplitudes)), product_(4, a_) {
  if (a_.empty()) throw ConfigError("TestDensity: dimension must be at least 1");
  for (double a : a_) {
    if (!(1.0 + a * kB4Min > 0.0) || !(1.0 + a * kB4Max > 0.0)) {
      throw ConfigError("TestDensity: amplitude " + std::to_string(a) + " makes the density non-positive");
    }
  }
}

double TestDensity::operator()(std::span<const double> y) const {
  if (y.size() != dim()) throw DomainError("TestDensity: dimension mismatch");
  double prod = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (!(y[j] >= 0.0 && y[j] <= 1.0)) throw DomainError("TestDensity: point outside [0,1]^d");
    prod *= 1.0 + a_[j] * bernoulli_eval(4, y[j]);
  }
  return prod;
}

double TestDensity::factor_envelope(std::size_t j) const {
  return 1.0 + std::max(a_[j] * kB4Max, a_[j] * kB4Min);
}

double TestDensity::envelope() const {
  double c = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) c *= factor_envelope(j);
  return c;
}

double TestDensity::marginal_cdf(std::size_t j, double y) const {
  if (j >= dim()) throw DomainError("marginal_cdf: coordinate out of range");
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  // int_0^y B_4 = y^5/5 - y^4/2 + y^3/3 - y/30
  const double antiderivative = y * (-1.0 / 30.0 + y * y * (1.0 / 3.0 + y * (-0.5 + y * 0.2)));
  return y + a_[j] * antiderivative;
}

double test_density_factor_coefficient(double amplitude, int h) {
  const double w = 2.0 * std::numbers::pi * static_cast<double>(h);
  return -24.0 * amplitude / (w * w * w * w);
}

FourierCoefficients TestDensity::fourier_coefficients(int h_max) const {
  if (h_max < 0) throw DomainError("fourier_coefficients: h_max must be non-negative");
  FourierCoefficients out;
  const std::size_t d = dim();
  MultiIndex h(d, -h_max);
  while (true) {
    double c = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (h[j] != 0) c *= test_density_factor_coefficient(a_[j], h[j]);
    }
    out.emplace(h, std::complex<double>(c, 0.0));
    std::size_t j = 0;
    while (j < d && h[j] == h_max) h[j++] = -h_max;
    if (j == d) break;
    ++h[j];
  }
  return out;
}

BernoulliProduct TestDensity::mean_embedding(const KorobovKernel& kernel) const {
  if (kernel.dim() != dim()) throw DomainError("mean_embedding: kernel dimension mismatch");
  const double alpha = kernel.alpha();
  if (alpha != 2.0 && alpha != 4.0) throw ConfigError("mean_embedding: closed form needs alpha in {2, 4}");
  const int n = static_cast<int>(alpha) + 4;
  const double base = -24.0 / std::pow(2.0 * std::numbers::pi, 4) * bernoulli_series_scale(n, 1.0);
  std::vector<double> scales(dim());
  for (std::size_t j = 0; j < dim(); ++j) scales[j] = kernel.weights()[j] * a_[j] * base;
  return BernoulliProduct(n, std::move(scales));
}

double TestDensity::l2_norm_squared() const {
  double p = 1.0;
  for (double a : a_) p *= 1.0 + a * a / 2100.0;
  return p;
}

void sample_into(const TestDensity& f, RandomStream& rng, PointSet& out, SamplerMode mode,
                 SamplerStats* stats) {
  if (out.dim() != f.dim()) throw DomainError("sample_into: dimension mismatch");
  const auto& b4 = bernoulli_poly(4);
  const auto a = f.amplitudes();
  const std::size_t d = f.dim();
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;

  if (mode == SamplerMode::factorized) {
    std::vector<double> env(d);
    for (std::size_t j = 0; j < d; ++j) env[j] = f.factor_envelope(j);
    for (std::size_t j = 0; j < d; ++j) {
      auto col = out.coordinate(j);
      for (double& y : col) {
        while (true) {
          const double prop = rng.uniform();
          const double u = rng.uniform();
          ++proposals;
          if (u * env[j] <= 1.0 + a[j] * b4(prop)) {
            y = prop;
            ++accepted;
            break;
          }
        }
      }
    }
  } else {
    const double c = f.envelope();
    std::vector<double> prop(d);
    for (std::size_t i = 0; i < out.size(); ++i) {
      while (true) {
        for (double& v : prop) v = rng.uniform();
        const double u = rng.uniform();
        ++proposals;
        double fy = 1.0;
        for (std::size_t j = 0; j < d; ++j) fy *= 1.0 + a[j] * b4(prop[j]);
        if (u * c <= fy) {
          for (std::size_t j = 0; j < d; ++j) out.at(i, j) = prop[j];
          ++accepted;
          break;
        }
      }
    }
  }
  if (stats != nullptr) {
    stats->proposals += proposals;
    stats->accepted += accepted;
  }
}

PointSet sample(const TestDensity& f, std::size_t count, std::uint64_t seed, std::uint64_t stream,
                SamplerMode mode) {
  PointSet out(f.dim(), count);
  RandomStream rng(seed, stream);
  sample_into(f, rng, out, mode);
  return out;
}

}  // namespace latkde
