#pragma once

#include <complex>
#include <span>
#include <vector>

#include "latkde/dft.hpp"
#include "latkde/kernels.hpp"
#include "latkde/lattice.hpp"
#include "latkde/point_set.hpp"

namespace latkde {

inline constexpr double kNullSpaceThreshold = 1e-12;

/// Real symmetric circulant matrix A_{pq} = row[(q - p) mod n], diagonalized by the DFT.
class Circulant {
 public:
  explicit Circulant(std::vector<double> first_row);

  std::size_t size() const noexcept { return row_.size(); }
  std::span<const double> first_row() const noexcept { return row_; }
  /// DFT of the first row. Real up to rounding for a symmetric row.
  std::span<const std::complex<double>> eigenvalues() const noexcept { return eig_; }
  const Dft& dft() const noexcept { return dft_; }

  /// A x, computed as a circular convolution in the Fourier domain.
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::vector<double> row_;
  Dft dft_;
  std::vector<std::complex<double>> eig_;
};

struct CirculantSolveInfo {
  std::size_t null_directions = 0;
  double max_imaginary_residue = 0.0;
};

/// Minimum-norm solution of A c = b: c^_k = b^_k / A^_k, with eigenvalues |A^_k| <= threshold *
/// max |A^| treated as null directions (c^_k = 0), so c lies in null(A)^perp.
/// Length mismatch -> DomainError; every eigenvalue null -> SingularSystemError.
std::vector<double> solve_circulant(const Circulant& a, std::span<const double> b,
                                    double rel_threshold = kNullSpaceThreshold,
                                    CirculantSolveInfo* info = nullptr);

/// Lattice Gram system A = K~ + lambda K, with A_{jk} a function of the lag (k - j) mod N only.
class GramSystem {
 public:
  GramSystem(const LatticeRule& rule, const KorobovKernel& kernel, double lambda);

  const LatticeRule& rule() const noexcept { return rule_; }
  const KorobovKernel& kernel() const noexcept { return kernel_; }
  double lambda() const noexcept { return lambda_; }
  std::span<const double> first_row() const noexcept { return matrix_.first_row(); }
  const Circulant& matrix() const noexcept { return matrix_; }

 private:
  LatticeRule rule_;
  KorobovKernel kernel_;
  double lambda_;
  Circulant matrix_;
};

/// Kernel-only circulant K(x_1, x_{1+m}) on the lattice.
Circulant kernel_circulant(const LatticeRule& rule, const KorobovKernel& kernel);
Circulant l2_kernel_circulant(const LatticeRule& rule, const KorobovKernel& kernel);

/// A with first_row[m] = K~(lag m) + lambda K(lag m). Needs closed forms for K and K~
/// (alpha in {2, 4}); lambda <= 0 -> DomainError.
GramSystem assemble_system(const LatticeRule& rule, const KorobovKernel& kernel, double lambda);

/// b_j = (1/M) sum_m K(x_j, Y_m). Empty sample -> DomainError.
std::vector<double> assemble_rhs(const LatticeRule& rule, const KorobovKernel& kernel,
                                 const PointSet& sample);

/// Unnormalized sums sum_m K(x_j, Y_m), added into `sums` (for streaming over sample blocks).
void accumulate_rhs(const LatticeRule& rule, const KorobovKernel& kernel, const PointSet& block,
                    std::span<double> sums);

/// b_j = g(x_j) for an exact functional, e.g. a kernel mean embedding.
template <class Functional>
std::vector<double> assemble_rhs_exact(const LatticeRule& rule, Functional&& g) {
  const PointSet pts = rule.points();
  std::vector<double> b(pts.size());
  std::vector<double> x(pts.dim());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    pts.copy_point(k, x);
    b[k] = g(std::span<const double>(x));
  }
  return b;
}

/// f^(x) = sum_k c_k K(x_k, x) on a rank-1 lattice.
class DensityEstimator {
 public:
  DensityEstimator(LatticeRule rule, KorobovKernel kernel, double lambda,
                   std::vector<double> coefficients);

  const LatticeRule& rule() const noexcept { return rule_; }
  const KorobovKernel& kernel() const noexcept { return kernel_; }
  double lambda() const noexcept { return lambda_; }
  std::span<const double> coefficients() const noexcept { return c_; }
  std::size_t dim() const noexcept { return rule_.dim(); }

  /// Dimension mismatch -> DomainError.
  double operator()(std::span<const double> x) const;

  /// f^ at the lattice points x_1..x_N: the kernel circulant applied to c.
  std::vector<double> evaluate_at_lattice() const;

  /// f^({x_n + shift}), n = 1..N, as one circular convolution of c with the shifted kernel row.
  std::vector<double> evaluate_shifted(std::span<const double> shift) const;

  /// Values on the grid {x_n + p_l}: out[l * N + n].
  std::vector<double> evaluate_grid(const PointSet& shifts) const;

  /// int f^ = sum_k c_k, since every K(x_k, .) integrates to 1.
  double integral() const;

  /// ||f^||_K^2 = c^T K c and ||f^||_{L2}^2 = c^T K~ c.
  double rkhs_norm_squared() const;
  double l2_norm_squared() const;

 private:
  LatticeRule rule_;
  KorobovKernel kernel_;
  double lambda_;
  std::vector<double> c_;
};

DensityEstimator fit(const LatticeRule& rule, const KorobovKernel& kernel, double lambda,
                     const PointSet& sample);
DensityEstimator fit_rhs(const LatticeRule& rule, const KorobovKernel& kernel, double lambda,
                         std::span<const double> b);

/// max_k |<f^, K(x_k,.)>_{L2} + lambda f^(x_k) - b_k| / max_k |b_k|, by direct substitution
/// through the pointwise kernel evaluations (no circulant shortcut).
double galerkin_residual(const DensityEstimator& est, std::span<const double> b);

}  // namespace latkde
