#include "latkde/mise.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "latkde/errors.hpp"
#include "latkde/qmc.hpp"

namespace latkde {
namespace {

constexpr std::size_t kSampleBlock = 16384;

LatticeRule make_rule(const MiseConfig& cfg) {
  if (cfg.generator) return LatticeRule(cfg.n, *cfg.generator);
  const auto weights = ProductWeights::power_law(cfg.d, cfg.alpha);
  return LatticeRule(cfg.n, cbc_construct(cfg.n, cfg.d, cfg.alpha, weights).z);
}

const MiseConfig& validated(const MiseConfig& cfg) {
  cfg.validate();
  return cfg;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void MiseConfig::validate() const {
  if (d == 0) throw ConfigError("MISE config: d must be at least 1");
  if (alpha != 2 && alpha != 4) throw ConfigError("MISE config: alpha must be 2 or 4");
  if (!is_prime(n)) throw ConfigError("MISE config: N must be prime");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("MISE config: lambda must be positive");
  if (m == 0) throw ConfigError("MISE config: M must be at least 1");
  if (shifts == 0) throw ConfigError("MISE config: L must be at least 1");
  if (s_min < 2) throw ConfigError("MISE config: s_min must be at least 2");
  if (s_max < s_min) throw ConfigError("MISE config: s_max must be at least s_min");
  if (!(ci_ratio_target > 0.0 && ci_ratio_target < 1.0)) {
    throw ConfigError("MISE config: ci_ratio_target must lie in (0, 1)");
  }
  if (threads == 0) throw ConfigError("MISE config: threads must be at least 1");
  if (generator && generator->size() != d) throw ConfigError("MISE config: generator length must equal d");
}

MiseExperiment::MiseExperiment(const MiseConfig& config, const PointSet& shifts)
    : config_(validated(config)),
      rule_(make_rule(config_)),
      kernel_(static_cast<double>(config_.alpha), ProductWeights::power_law(config_.d, config_.alpha)),
      density_(config_.d),
      system_(rule_, kernel_, config_.lambda),
      shifts_(shifts) {
  if (shifts_.dim() != config_.d || shifts_.empty()) {
    throw ConfigError("MiseExperiment: shift set dimension must equal d");
  }
  const std::size_t n = rule_.size();
  const PointSet lags = rule_.lag_points();
  const Dft& dft = system_.matrix().dft();
  density_grid_.resize(shifts_.size() * n);
  shifted_rows_hat_.reserve(shifts_.size());

  std::vector<double> p(config_.d), neg(config_.d), row(n);
  for (std::size_t l = 0; l < shifts_.size(); ++l) {
    shifts_.copy_point(l, p);
    for (std::size_t j = 0; j < p.size(); ++j) neg[j] = -p[j];
    // Grid points {x_n + p} for n = 1..N are lag points 1..N-1 followed by the origin, each
    // shifted; f is periodic so the lag ordering is rotated by one.
    density_.as_product().shifted_eval(lags, neg, row);
    for (std::size_t k = 0; k < n; ++k) density_grid_[l * n + k] = row[(k + 1) % n];
    kernel_.lag_kernel().shifted_eval(lags, neg, row);
    shifted_rows_hat_.push_back(dft.forward(row));
  }
}

MiseExperiment::MiseExperiment(const MiseConfig& config)
    : MiseExperiment(config, generate_shifts(validated(config).shifts, config.d)) {}

std::vector<double> MiseExperiment::grid_values(std::span<const double> c) const {
  const std::size_t n = rule_.size();
  if (c.size() != n) throw DomainError("grid_values: coefficient length must equal N");
  const Dft& dft = system_.matrix().dft();
  const auto ch = dft.forward(c);
  std::vector<std::complex<double>> prod(n), back(n);
  std::vector<double> out(shifted_rows_hat_.size() * n);
  for (std::size_t l = 0; l < shifted_rows_hat_.size(); ++l) {
    for (std::size_t k = 0; k < n; ++k) prod[k] = ch[k] * shifted_rows_hat_[l][k];
    dft.inverse(prod, back);
    for (std::size_t k = 0; k < n; ++k) out[l * n + k] = back[k].real();
  }
  return out;
}

double mean_squared_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw DomainError("mean_squared_difference: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    s += e * e;
  }
  return s / static_cast<double>(a.size());
}

double MiseExperiment::grid_squared_error(std::span<const double> c) const {
  return mean_squared_difference(grid_values(c), density_grid_);
}

std::vector<double> MiseExperiment::exact_coefficients() const {
  const BernoulliProduct embedding = density_.mean_embedding(kernel_);
  const auto b = assemble_rhs_exact(rule_, [&](std::span<const double> x) { return embedding(x); });
  return solve_circulant(system_.matrix(), b);
}

std::vector<double> MiseExperiment::replication_coefficients(std::size_t k) const {
  RandomStream rng(config_.seed, k);
  std::vector<double> sums(rule_.size(), 0.0);
  PointSet block(config_.d, std::min<std::uint64_t>(kSampleBlock, config_.m));
  std::uint64_t remaining = config_.m;
  while (remaining > 0) {
    if (remaining < block.size()) block.truncate(remaining);
    sample_into(density_, rng, block);
    accumulate_rhs(rule_, kernel_, block, sums);
    remaining -= block.size();
  }
  const double inv_m = 1.0 / static_cast<double>(config_.m);
  for (double& v : sums) v *= inv_m;
  return solve_circulant(system_.matrix(), sums);
}

MiseExperiment::Replication MiseExperiment::run_replication(std::size_t k) const {
  const auto c = replication_coefficients(k);
  double integral = 0.0;
  for (double v : c) integral += v;
  return {grid_squared_error(c), integral};
}

MeanEstimate normal_ci95(std::span<const double> values) {
  const std::size_t s = values.size();
  if (s == 0) return {};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(s);
  if (s < 2) return {mean, std::numeric_limits<double>::infinity()};
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(s - 1);
  return {mean, 1.96 * std::sqrt(var / static_cast<double>(s))};
}

namespace {

// Runs replications [begin, end) on up to `threads` workers; results land at their index.
void run_batch(const MiseExperiment& exp, std::size_t begin, std::size_t end, unsigned threads,
               std::vector<MiseExperiment::Replication>& out) {
  out.resize(end);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, end - begin));
  if (workers <= 1) {
    for (std::size_t k = begin; k < end; ++k) out[k] = exp.run_replication(k);
    return;
  }
  std::atomic<std::size_t> next{begin};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < end; k = next++) out[k] = exp.run_replication(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

MiseReport estimate_mise(const MiseExperiment& exp) {
  const auto start = std::chrono::steady_clock::now();
  const MiseConfig& cfg = exp.config();
  MiseReport report;
  report.config = cfg;
  report.generator.assign(exp.rule().generator().begin(), exp.rule().generator().end());

  std::vector<MiseExperiment::Replication> reps;
  std::size_t target = cfg.s_min;
  std::size_t done = 0;
  std::vector<double> errs;
  while (true) {
    run_batch(exp, done, target, cfg.threads, reps);
    done = target;
    errs.clear();
    for (const auto& r : reps) errs.push_back(r.squared_error);
    const auto est = normal_ci95(errs);
    report.mise = est.mean;
    report.ci_half_width = est.half_width;
    report.ci_target_met = est.half_width <= cfg.ci_ratio_target * est.mean;
    if (report.ci_target_met || done >= cfg.s_max) break;
    target = std::min(2 * done, cfg.s_max);
  }
  report.s_used = done;
  double integral = 0.0;
  for (const auto& r : reps) integral += r.integral;
  report.integral_mean = integral / static_cast<double>(done);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

MiseReport estimate_mise(const MiseConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  MiseExperiment exp(config);
  MiseReport r = estimate_mise(exp);
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::size_t SweepGrid::size() const {
  const std::size_t lambdas = lambda_scale ? 1 : lambda.size();
  return d.size() * alpha.size() * n.size() * lambdas * m.size();
}

std::vector<MiseConfig> SweepGrid::expand(const MiseConfig& base) const {
  std::vector<MiseConfig> out;
  const std::vector<double> lambdas = lambda_scale ? std::vector<double>{0.0} : lambda;
  for (std::size_t dd : d) {
    for (int a : alpha) {
      for (std::uint64_t nn : n) {
        for (double lam : lambdas) {
          for (std::uint64_t mm : m) {
            MiseConfig cfg = base;
            cfg.d = dd;
            cfg.alpha = a;
            cfg.n = nn;
            cfg.m = mm;
            cfg.lambda = lambda_scale
                             ? *lambda_scale * std::pow(static_cast<double>(mm), -1.0 / (1.0 + 1.0 / a))
                             : lam;
            if (cfg.generator && cfg.generator->size() != dd) cfg.generator.reset();
            out.push_back(std::move(cfg));
          }
        }
      }
    }
  }
  return out;
}

SweepGrid preset_grid(std::string_view name, std::size_t d, int alpha, std::uint64_t max_m) {
  SweepGrid g;
  g.d = {d};
  g.alpha = {alpha};
  const auto powers_of_ten = [max_m](int lo, int hi) {
    std::vector<std::uint64_t> ms;
    std::uint64_t v = 1;
    for (int k = 0; k <= hi; ++k, v *= 10) {
      if (k >= lo && v <= max_m) ms.push_back(v);
    }
    return ms;
  };
  if (name == "fig1") {
    g.n = {5, 7, 11};
    g.lambda = {0.8, 0.4, 0.2, 0.1, 0.05, 0.01};
    g.m = powers_of_ten(3, 6);
  } else if (name == "fig3") {
    g.n = {11};
    g.lambda = {0.1, 0.01, 0.001, 0.0001};
    g.m = powers_of_ten(3, 6);
  } else if (name == "fig5") {
    g.n = {11};
    for (int k = 0; k <= 70; ++k) g.lambda.push_back(std::pow(0.7, k));
    g.m = {10000};
  } else if (name == "fig7") {
    g.n = {11};
    if (alpha == 2) {
      g.lambda_scale = 1000.0;
    } else if (alpha == 4) {
      g.lambda_scale = 5000.0;
    } else {
      throw ConfigError("fig7 preset is defined for alpha 2 and 4");
    }
    g.m = powers_of_ten(3, 7);
  } else {
    throw ConfigError("unknown preset: " + std::string(name));
  }
  return g;
}

std::vector<MiseReport> sweep(const SweepGrid& grid, const MiseConfig& base,
                              const std::function<void(const MiseReport&)>& on_report) {
  const auto configs = grid.expand(base);
  if (configs.empty()) throw ConfigError("sweep: empty grid");
  std::vector<MiseReport> out;
  out.reserve(configs.size());
  for (const auto& cfg : configs) {
    MiseReport r;
    try {
      r = estimate_mise(cfg);
    } catch (const std::exception& e) {
      r = MiseReport{};
      r.config = cfg;
      r.mise = std::numeric_limits<double>::quiet_NaN();
      r.ci_half_width = std::numeric_limits<double>::quiet_NaN();
      r.integral_mean = std::numeric_limits<double>::quiet_NaN();
      r.error = e.what();
    }
    if (on_report) on_report(r);
    out.push_back(std::move(r));
  }
  return out;
}

void write_report_csv_header(std::ostream& os) {
  os << "d,alpha,N,lambda,M,S_used,mise,ci_half_width,integral_mean,seed,wall_time_s\n";
}

void write_report_csv_row(std::ostream& os, const MiseReport& r) {
  const auto& c = r.config;
  os << c.d << ',' << c.alpha << ',' << c.n << ',' << format_double(c.lambda) << ',' << c.m << ','
     << r.s_used << ',' << format_double(r.mise) << ',' << format_double(r.ci_half_width) << ','
     << format_double(r.integral_mean) << ',' << c.seed << ',' << format_double(r.wall_time_s)
     << '\n';
}

void write_report_jsonl(std::ostream& os, const MiseReport& r) {
  const auto& c = r.config;
  nlohmann::ordered_json j;
  j["d"] = c.d;
  j["alpha"] = c.alpha;
  j["N"] = c.n;
  j["lambda"] = c.lambda;
  j["M"] = c.m;
  j["L"] = c.shifts;
  j["S_min"] = c.s_min;
  j["S_max"] = c.s_max;
  j["ci_ratio_target"] = c.ci_ratio_target;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["z"] = r.generator;
  j["S_used"] = r.s_used;
  j["mise"] = r.mise;
  j["ci_half_width"] = r.ci_half_width;
  j["ci_target_met"] = r.ci_target_met;
  j["integral_mean"] = r.integral_mean;
  j["wall_time_s"] = r.wall_time_s;
  if (!r.error.empty()) j["error"] = r.error;
  os << j.dump() << '\n';
}

}  // namespace latkde
