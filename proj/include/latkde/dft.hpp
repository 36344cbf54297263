#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace latkde {

/// Direct discrete Fourier transform of fixed length n,
/// X_k = sum_m x_m e^{-2 pi i k m / n}. O(n^2), twiddles indexed by (k m mod n) so every
/// entry uses an exactly reduced angle. Lattice sizes here are small primes, where this is
/// the simplest accurate choice.
class Dft {
 public:
  explicit Dft(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  /// Unnormalized inverse scaled by 1/n, so inverse(forward(x)) == x.
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

  std::vector<std::complex<double>> forward(std::span<const double> in) const;

 private:
  std::size_t n_;
  std::vector<std::complex<double>> twiddle_;  // e^{-2 pi i r / n}
};

}  // namespace latkde
