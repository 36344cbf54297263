#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latkde/estimator.hpp"
#include "latkde/kernels.hpp"
#include "latkde/lattice.hpp"
#include "latkde/point_set.hpp"
#include "latkde/sampling.hpp"

namespace latkde {

struct MiseConfig {
  std::size_t d = 6;
  int alpha = 2;
  std::uint64_t n = 11;
  double lambda = 0.01;
  std::uint64_t m = 10000;
  std::size_t shifts = 100;      // L
  std::size_t s_min = 8;         // first batch of the doubling schedule
  std::size_t s_max = 512;
  double ci_ratio_target = 0.1;  // stop once the 95% half-width <= ratio * MISE
  std::uint64_t seed = 42;
  unsigned threads = 1;
  /// Generating vector; constructed by CBC with weights j^-alpha when absent.
  std::optional<std::vector<std::uint64_t>> generator;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct MiseReport {
  MiseConfig config;
  std::vector<std::uint64_t> generator;
  double mise = 0.0;
  double ci_half_width = 0.0;
  std::size_t s_used = 0;
  double integral_mean = 0.0;
  bool ci_target_met = false;
  double wall_time_s = 0.0;
  std::string error;  // non-empty when this configuration failed
};

/// Everything about one MISE configuration that does not depend on the sample: lattice,
/// kernel, Gram system, the N*L evaluation grid {x_n + p_l}, the density on that grid and the
/// Fourier transforms of the shifted kernel rows used for fast estimator evaluation.
class MiseExperiment {
 public:
  MiseExperiment(const MiseConfig& config, const PointSet& shifts);
  /// Shifts are the first L Sobol' points from the default direction table.
  explicit MiseExperiment(const MiseConfig& config);

  const MiseConfig& config() const noexcept { return config_; }
  const LatticeRule& rule() const noexcept { return rule_; }
  const KorobovKernel& kernel() const noexcept { return kernel_; }
  const TestDensity& density() const noexcept { return density_; }
  const GramSystem& system() const noexcept { return system_; }
  const PointSet& shifts() const noexcept { return shifts_; }

  std::size_t grid_size() const noexcept { return density_grid_.size(); }
  /// f({x_n + p_l}) at index l * N + n.
  std::span<const double> density_grid() const noexcept { return density_grid_; }

  /// f^ on the grid for coefficient vector c, same layout as density_grid().
  std::vector<double> grid_values(std::span<const double> c) const;

  /// (1 / NL) sum over the grid of |f^ - f|^2.
  double grid_squared_error(std::span<const double> c) const;

  /// Coefficients of the ideal estimator f_N^lambda (right-hand side int K(x_j, y) f(y) dy).
  std::vector<double> exact_coefficients() const;

  /// Coefficients fitted to replication k's sample of size M, drawn from stream (seed, k).
  std::vector<double> replication_coefficients(std::size_t k) const;

  struct Replication {
    double squared_error;
    double integral;
  };
  Replication run_replication(std::size_t k) const;

 private:
  MiseConfig config_;
  LatticeRule rule_;
  KorobovKernel kernel_;
  TestDensity density_;
  GramSystem system_;
  PointSet shifts_;
  std::vector<double> density_grid_;
  std::vector<std::vector<std::complex<double>>> shifted_rows_hat_;
};

/// Mean of squared differences of two equally long vectors.
double mean_squared_difference(std::span<const double> a, std::span<const double> b);

struct MeanEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 * sd / sqrt(S)
};
MeanEstimate normal_ci95(std::span<const double> values);

/// Monte-Carlo MISE with the 95% CI stopping rule (S = s_min, 2 s_min, ... <= s_max).
MiseReport estimate_mise(const MiseConfig& config);
MiseReport estimate_mise(const MiseExperiment& experiment);

/// Cartesian grid of configurations. When lambda_scale is set, lambda is not taken from
/// `lambda` but set per point to lambda_scale * M^(-1 / (1 + 1/alpha)).
struct SweepGrid {
  std::vector<std::size_t> d;
  std::vector<int> alpha;
  std::vector<std::uint64_t> n;
  std::vector<double> lambda;
  std::vector<std::uint64_t> m;
  std::optional<double> lambda_scale;

  std::size_t size() const;
  std::vector<MiseConfig> expand(const MiseConfig& base) const;
};

/// Preset sweeps "fig1", "fig3", "fig5", "fig7". Sample sizes above max_m are dropped.
/// Unknown name -> ConfigError.
SweepGrid preset_grid(std::string_view name, std::size_t d, int alpha, std::uint64_t max_m = 1000000);

/// One report per grid point, in expansion order; `on_report` sees each as it completes.
/// Failures are recorded in MiseReport::error.
std::vector<MiseReport> sweep(const SweepGrid& grid, const MiseConfig& base,
                              const std::function<void(const MiseReport&)>& on_report = {});

/// CSV: d,alpha,N,lambda,M,S_used,mise,ci_half_width,integral_mean,seed,wall_time_s
void write_report_csv_header(std::ostream& os);
void write_report_csv_row(std::ostream& os, const MiseReport& report);
/// One JSON object per line with the full configuration echo.
void write_report_jsonl(std::ostream& os, const MiseReport& report);

}  // namespace latkde
