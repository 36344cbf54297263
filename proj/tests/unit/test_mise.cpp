#include <doctest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "latkde/errors.hpp"
#include "latkde/mise.hpp"
#include "latkde/qmc.hpp"

using namespace latkde;
using doctest::Approx;

namespace {

MiseConfig small_config() {
  MiseConfig c;
  c.d = 3;
  c.n = 7;
  c.lambda = 0.05;
  c.m = 500;
  c.shifts = 16;
  c.s_min = 4;
  c.s_max = 16;
  return c;
}

}  // namespace

TEST_SUITE("mise") {

TEST_CASE("config validation") {
  MiseConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = c;
  bad.n = 9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.alpha = 3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.ci_ratio_target = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.s_max = 4;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.generator = std::vector<std::uint64_t>{1, 2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("grid with a single zero shift is the raw lattice") {
  auto cfg = small_config();
  const MiseExperiment exp(cfg, PointSet(cfg.d, 1));
  const auto c = exp.replication_coefficients(0);
  const DensityEstimator est(exp.rule(), exp.kernel(), cfg.lambda, c);
  const auto pts = exp.rule().points();
  double direct = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto x = pts.point(i);
    direct += std::pow(est(x) - exp.density()(x), 2);
  }
  direct /= static_cast<double>(pts.size());
  CHECK(exp.grid_squared_error(c) == Approx(direct).epsilon(1e-12));
}

TEST_CASE("grid values match pointwise evaluation") {
  const auto cfg = small_config();
  const MiseExperiment exp(cfg);
  const auto c = exp.exact_coefficients();
  const DensityEstimator est(exp.rule(), exp.kernel(), cfg.lambda, c);
  const auto grid = exp.grid_values(c);
  const auto pts = exp.rule().points();
  std::vector<double> x(cfg.d);
  for (std::size_t l = 0; l < cfg.shifts; ++l) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < cfg.d; ++j) x[j] = std::fmod(pts.at(i, j) + exp.shifts().at(l, j), 1.0);
      CHECK(grid[l * pts.size() + i] == Approx(est(x)).epsilon(1e-12));
      CHECK(exp.density_grid()[l * pts.size() + i] == Approx(exp.density()(x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("estimator equal to the target has zero error") {
  const auto cfg = small_config();
  const MiseExperiment exp(cfg);
  const auto c = exp.exact_coefficients();
  const auto values = exp.grid_values(c);
  CHECK(mean_squared_difference(values, values) == 0.0);
  CHECK(exp.grid_squared_error(c) > 0.0);
}

TEST_CASE("ideal-estimator error against an independent quadrature") {
  auto cfg = small_config();
  cfg.shifts = 256;
  const MiseExperiment exp(cfg);
  const auto c = exp.exact_coefficients();
  const DensityEstimator est(exp.rule(), exp.kernel(), cfg.lambda, c);
  const PointSet u = generate_shifts(1u << 15, cfg.d);
  double ise = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = u.point(i);
    ise += std::pow(est(x) - exp.density()(x), 2);
  }
  ise /= static_cast<double>(u.size());
  CHECK(exp.grid_squared_error(c) == Approx(ise).epsilon(0.05));
}

TEST_CASE("confidence interval helper") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto e = normal_ci95(v);
  CHECK(e.mean == 2.5);
  CHECK(e.half_width == Approx(1.96 * std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-15));
}

TEST_CASE("stopping rule and determinism") {
  auto cfg = small_config();
  const auto a = estimate_mise(cfg);
  CHECK(a.error.empty());
  CHECK(a.s_used >= cfg.s_min);
  CHECK(a.s_used <= cfg.s_max);
  CHECK(a.mise > 0.0);
  CHECK(a.ci_half_width >= 0.0);
  CHECK(a.ci_target_met == (a.ci_half_width <= cfg.ci_ratio_target * a.mise));
  if (!a.ci_target_met) CHECK(a.s_used == cfg.s_max);

  cfg.threads = 3;
  const auto b = estimate_mise(cfg);
  CHECK(b.mise == a.mise);
  CHECK(b.ci_half_width == a.ci_half_width);
  CHECK(b.s_used == a.s_used);
  CHECK(b.integral_mean == a.integral_mean);
}

TEST_CASE("regression value at the default configuration") {
  std::ifstream in(std::string(LATKDE_GOLDEN_DIR) + "/mise_default_m1e4.txt");
  REQUIRE(in);
  std::string line;
  std::getline(in, line);  // comment
  double mise = 0.0, half = 0.0, integral = 0.0;
  std::size_t s = 0;
  in >> mise >> half >> s >> integral;
  MiseConfig cfg;  // d = 6, alpha = 2, N = 11, lambda = 0.01, M = 1e4, seed = 42
  const auto r = estimate_mise(cfg);
  CHECK(r.s_used == s);
  CHECK(r.mise == Approx(mise).epsilon(1e-12));
  CHECK(r.ci_half_width == Approx(half).epsilon(1e-10));
  CHECK(r.integral_mean == Approx(integral).epsilon(1e-12));
}

TEST_CASE("presets") {
  CHECK(preset_grid("fig1", 6, 2).size() == 3 * 6 * 4);
  CHECK(preset_grid("fig3", 6, 2).size() == 4 * 4);
  CHECK(preset_grid("fig5", 15, 4).size() == 71);
  const auto fig7 = preset_grid("fig7", 6, 2);
  CHECK(fig7.size() == 4);
  CHECK(preset_grid("fig7", 6, 2, 10000000).size() == 5);
  const auto cfgs = fig7.expand(MiseConfig{});
  REQUIRE(cfgs.size() == 4);
  CHECK(cfgs[0].m == 1000);
  CHECK(cfgs[0].lambda == Approx(1000.0 * std::pow(1000.0, -2.0 / 3.0)).epsilon(1e-14));
  CHECK(preset_grid("fig7", 6, 4).expand(MiseConfig{})[3].lambda ==
        Approx(5000.0 * std::pow(1e6, -0.8)).epsilon(1e-14));
  CHECK_THROWS_AS(preset_grid("fig9", 6, 2), ConfigError);
}

TEST_CASE("sweep") {
  const auto cfg = small_config();
  SweepGrid single{{cfg.d}, {cfg.alpha}, {cfg.n}, {cfg.lambda}, {cfg.m}, std::nullopt};
  std::size_t seen = 0;
  const auto reports = sweep(single, cfg, [&](const MiseReport&) { ++seen; });
  REQUIRE(reports.size() == 1);
  CHECK(seen == 1);
  const auto direct = estimate_mise(cfg);
  CHECK(reports[0].mise == direct.mise);
  CHECK(reports[0].s_used == direct.s_used);

  SweepGrid partial{{cfg.d}, {cfg.alpha}, {cfg.n, 9}, {cfg.lambda}, {cfg.m}, std::nullopt};
  const auto mixed = sweep(partial, cfg);
  REQUIRE(mixed.size() == 2);
  CHECK(mixed[0].error.empty());
  CHECK_FALSE(mixed[1].error.empty());

  SweepGrid empty{{cfg.d}, {cfg.alpha}, {}, {cfg.lambda}, {cfg.m}, std::nullopt};
  CHECK_THROWS_AS(sweep(empty, cfg), ConfigError);
}

TEST_CASE("report formats") {
  MiseReport r;
  r.config = small_config();
  r.generator = {1, 3, 2};
  r.mise = 0.125;
  r.ci_half_width = 0.01;
  r.s_used = 8;
  r.integral_mean = 0.9;
  r.wall_time_s = 1.5;
  std::ostringstream csv;
  write_report_csv_header(csv);
  write_report_csv_row(csv, r);
  CHECK(csv.str() ==
        "d,alpha,N,lambda,M,S_used,mise,ci_half_width,integral_mean,seed,wall_time_s\n"
        "3,2,7,0.050000000000000003,500,8,0.125,0.01,0.90000000000000002,42,1.5\n");
  std::ostringstream js;
  write_report_jsonl(js, r);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["N"] == 7);
  CHECK(j["z"] == nlohmann::json::array({1, 3, 2}));
  CHECK(j["mise"] == 0.125);
  CHECK_FALSE(j.contains("error"));
}

}  // TEST_SUITE
