#include "latkde/dft.hpp"

#include <numbers>

#include "latkde/errors.hpp"

namespace latkde {

Dft::Dft(std::size_t n) : n_(n), twiddle_(n) {
  if (n == 0) throw DomainError("Dft: length must be positive");
  for (std::size_t r = 0; r < n; ++r) {
    twiddle_[r] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
  }
}

void Dft::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) throw DomainError("Dft: length mismatch");
  for (std::size_t k = 0; k < n_; ++k) {
    std::complex<double> acc = 0.0;
    std::size_t r = 0;
    for (std::size_t m = 0; m < n_; ++m) {
      acc += in[m] * twiddle_[r];
      r += k;
      if (r >= n_) r -= n_;
    }
    out[k] = acc;
  }
}

void Dft::inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) throw DomainError("Dft: length mismatch");
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    std::complex<double> acc = 0.0;
    std::size_t r = 0;
    for (std::size_t m = 0; m < n_; ++m) {
      acc += in[m] * std::conj(twiddle_[r]);
      r += k;
      if (r >= n_) r -= n_;
    }
    out[k] = acc * inv_n;
  }
}

std::vector<std::complex<double>> Dft::forward(std::span<const double> in) const {
  std::vector<std::complex<double>> x(in.begin(), in.end());
  std::vector<std::complex<double>> out(n_);
  forward(x, out);
  return out;
}

}  // namespace latkde
