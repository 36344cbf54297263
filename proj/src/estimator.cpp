#include "latkde/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latkde/errors.hpp"

namespace latkde {

Circulant::Circulant(std::vector<double> first_row)
    : row_(std::move(first_row)), dft_(row_.size()), eig_(dft_.forward(row_)) {}

std::vector<double> Circulant::apply(std::span<const double> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw DomainError("Circulant::apply: length mismatch");
  const auto xh = dft_.forward(x);
  std::vector<std::complex<double>> prod(n), back(n);
  for (std::size_t k = 0; k < n; ++k) prod[k] = eig_[k] * xh[k];
  dft_.inverse(prod, back);
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = back[k].real();
  return y;
}

std::vector<double> solve_circulant(const Circulant& a, std::span<const double> b,
                                    double rel_threshold, CirculantSolveInfo* info) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DomainError("solve_circulant: system and right-hand side differ in length");
  const auto eig = a.eigenvalues();
  double max_abs = 0.0;
  for (const auto& e : eig) max_abs = std::max(max_abs, std::abs(e));
  const double cut = rel_threshold * max_abs;

  const auto bh = a.dft().forward(b);
  std::vector<std::complex<double>> ch(n), c(n);
  std::size_t nulls = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(std::abs(eig[k]) > cut)) {
      ch[k] = 0.0;
      ++nulls;
    } else {
      ch[k] = bh[k] / eig[k];
    }
  }
  if (nulls == n) throw SingularSystemError("solve_circulant: every eigenvalue is below the null-space threshold");
  a.dft().inverse(ch, c);

  std::vector<double> x(n);
  double imag = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = c[k].real();
    imag = std::max(imag, std::abs(c[k].imag()));
  }
  if (info != nullptr) *info = {nulls, imag};
  return x;
}

namespace {

std::vector<double> lag_row(const LatticeRule& rule, const BernoulliProduct& g) {
  const PointSet lags = rule.lag_points();
  std::vector<double> row(lags.size());
  const std::vector<double> zero(rule.dim(), 0.0);
  g.shifted_eval(lags, zero, row);
  return row;
}

void check_kernel(const LatticeRule& rule, const KorobovKernel& kernel) {
  if (rule.dim() != kernel.dim()) {
    throw DomainError("lattice dimension " + std::to_string(rule.dim()) +
                      " does not match kernel dimension " + std::to_string(kernel.dim()));
  }
}

}  // namespace

Circulant kernel_circulant(const LatticeRule& rule, const KorobovKernel& kernel) {
  check_kernel(rule, kernel);
  return Circulant(lag_row(rule, kernel.lag_kernel()));
}

Circulant l2_kernel_circulant(const LatticeRule& rule, const KorobovKernel& kernel) {
  check_kernel(rule, kernel);
  return Circulant(lag_row(rule, kernel.l2_lag_kernel()));
}

namespace {

std::vector<double> gram_row(const LatticeRule& rule, const KorobovKernel& kernel, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
  check_kernel(rule, kernel);
  auto row = lag_row(rule, kernel.l2_lag_kernel());
  const auto k_row = lag_row(rule, kernel.lag_kernel());
  for (std::size_t m = 0; m < row.size(); ++m) row[m] += lambda * k_row[m];
  return row;
}

}  // namespace

GramSystem::GramSystem(const LatticeRule& rule, const KorobovKernel& kernel, double lambda)
    : rule_(rule), kernel_(kernel), lambda_(lambda), matrix_(gram_row(rule, kernel, lambda)) {}

GramSystem assemble_system(const LatticeRule& rule, const KorobovKernel& kernel, double lambda) {
  return GramSystem(rule, kernel, lambda);
}

void accumulate_rhs(const LatticeRule& rule, const KorobovKernel& kernel, const PointSet& block,
                    std::span<double> sums) {
  check_kernel(rule, kernel);
  if (block.dim() != rule.dim()) throw DomainError("sample dimension does not match the lattice");
  if (sums.size() != rule.size()) throw DomainError("accumulate_rhs: output length mismatch");
  const auto& g = kernel.lag_kernel();
  std::vector<double> x(rule.dim());
  for (std::uint64_t k = 1; k <= rule.size(); ++k) {
    rule.point(k, x);
    sums[k - 1] += g.shifted_sum(block, x);
  }
}

std::vector<double> assemble_rhs(const LatticeRule& rule, const KorobovKernel& kernel,
                                 const PointSet& sample) {
  if (sample.empty()) throw DomainError("assemble_rhs: empty sample");
  std::vector<double> b(rule.size(), 0.0);
  accumulate_rhs(rule, kernel, sample, b);
  const double inv_m = 1.0 / static_cast<double>(sample.size());
  for (double& v : b) v *= inv_m;
  return b;
}

DensityEstimator::DensityEstimator(LatticeRule rule, KorobovKernel kernel, double lambda,
                                   std::vector<double> coefficients)
    : rule_(std::move(rule)), kernel_(std::move(kernel)), lambda_(lambda), c_(std::move(coefficients)) {
  check_kernel(rule_, kernel_);
  if (c_.size() != rule_.size()) throw DomainError("DensityEstimator: coefficient count must equal N");
}

double DensityEstimator::operator()(std::span<const double> x) const {
  if (x.size() != dim()) throw DomainError("DensityEstimator: dimension mismatch");
  std::vector<double> xk(dim());
  double sum = 0.0;
  for (std::uint64_t k = 1; k <= rule_.size(); ++k) {
    rule_.point(k, xk);
    sum += c_[k - 1] * kernel_(xk, x);
  }
  return sum;
}

std::vector<double> DensityEstimator::evaluate_at_lattice() const {
  return kernel_circulant(rule_, kernel_).apply(c_);
}

std::vector<double> DensityEstimator::evaluate_shifted(std::span<const double> shift) const {
  if (shift.size() != dim()) throw DomainError("evaluate_shifted: dimension mismatch");
  const PointSet lags = rule_.lag_points();
  std::vector<double> neg(shift.begin(), shift.end());
  for (double& v : neg) v = -v;
  std::vector<double> row(lags.size());
  kernel_.lag_kernel().shifted_eval(lags, neg, row);
  // out[n] = sum_k c_k g[(n - k) mod N]
  const Dft dft(rule_.size());
  const auto ch = dft.forward(c_);
  const auto gh = dft.forward(row);
  std::vector<std::complex<double>> prod(ch.size()), back(ch.size());
  for (std::size_t k = 0; k < ch.size(); ++k) prod[k] = ch[k] * gh[k];
  dft.inverse(prod, back);
  std::vector<double> out(back.size());
  for (std::size_t k = 0; k < back.size(); ++k) out[k] = back[k].real();
  return out;
}

std::vector<double> DensityEstimator::evaluate_grid(const PointSet& shifts) const {
  if (shifts.dim() != dim()) throw DomainError("evaluate_grid: dimension mismatch");
  const std::size_t n = rule_.size();
  std::vector<double> out(shifts.size() * n);
  std::vector<double> p(dim());
  for (std::size_t l = 0; l < shifts.size(); ++l) {
    shifts.copy_point(l, p);
    const auto vals = evaluate_shifted(p);
    std::copy(vals.begin(), vals.end(), out.begin() + static_cast<std::ptrdiff_t>(l * n));
  }
  return out;
}

double DensityEstimator::integral() const {
  double s = 0.0;
  for (double v : c_) s += v;
  return s;
}

namespace {
double quadratic_form(const Circulant& a, std::span<const double> c) {
  const auto ac = a.apply(c);
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * ac[k];
  return s;
}
}  // namespace

double DensityEstimator::rkhs_norm_squared() const {
  return quadratic_form(kernel_circulant(rule_, kernel_), c_);
}

double DensityEstimator::l2_norm_squared() const {
  return quadratic_form(l2_kernel_circulant(rule_, kernel_), c_);
}

DensityEstimator fit_rhs(const LatticeRule& rule, const KorobovKernel& kernel, double lambda,
                         std::span<const double> b) {
  const GramSystem sys = assemble_system(rule, kernel, lambda);
  return DensityEstimator(rule, kernel, lambda, solve_circulant(sys.matrix(), b));
}

DensityEstimator fit(const LatticeRule& rule, const KorobovKernel& kernel, double lambda,
                     const PointSet& sample) {
  const auto b = assemble_rhs(rule, kernel, sample);
  return fit_rhs(rule, kernel, lambda, b);
}

double galerkin_residual(const DensityEstimator& est, std::span<const double> b) {
  const auto& rule = est.rule();
  const auto& kernel = est.kernel();
  if (b.size() != rule.size()) throw DomainError("galerkin_residual: length mismatch");
  const PointSet pts = rule.points();
  const auto c = est.coefficients();
  std::vector<double> xj(rule.dim()), xk(rule.dim());
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    pts.copy_point(j, xj);
    double lhs = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      pts.copy_point(k, xk);
      lhs += c[k] * (kernel.l2(xj, xk) + est.lambda() * kernel(xj, xk));
    }
    worst = std::max(worst, std::abs(lhs - b[j]));
    scale = std::max(scale, std::abs(b[j]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace latkde
