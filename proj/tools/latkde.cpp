// latkde: lattice-based kernel density estimation from the command line.
//
//   latkde cbc    --n 11 --dim 6 --alpha 2
//   latkde sample --d 6 --m 10000 --seed 42
//   latkde fit    --sample-csv sample.csv --n 11 --cbc --alpha 2 --lambda 0.01
//   latkde eval   --estimator fit.txt --point 0.1,0.2,...
//   latkde mise   --preset fig7 --d 6 --alpha 2 --seed 42
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "latkde/errors.hpp"
#include "latkde/estimator.hpp"
#include "latkde/io.hpp"
#include "latkde/lattice.hpp"
#include "latkde/mise.hpp"
#include "latkde/sampling.hpp"
#include "latkde/simd.hpp"

namespace fs = std::filesystem;
using namespace latkde;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Invalid arguments detected after parsing (bad N, empty grid, malformed input file).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path output_dir() {
  if (const char* env = std::getenv("LATKDE_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

fs::path resolve_output(const std::string& given, const std::string& fallback) {
  fs::path p = given.empty() ? output_dir() / fallback : fs::path(given);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::ifstream open_in(const std::string& p) {
  std::ifstream is(p);
  if (!is) throw UsageError("cannot read " + p);
  return is;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Every output file gets <file>.manifest.json next to it.
void write_manifest(const fs::path& out, const std::string& subcommand, const nlohmann::ordered_json& params,
                    const std::vector<fs::path>& outputs) {
  nlohmann::ordered_json m;
  m["subcommand"] = subcommand;
  m["parameters"] = params;
  if (params.contains("seed")) m["seed"] = params["seed"];
  std::vector<std::string> paths;
  for (const auto& p : outputs) paths.push_back(p.string());
  m["outputs"] = paths;
  m["version"] = LATKDE_VERSION;
  m["simd"] = std::string(simd::isa_name(simd::active_isa()));
  auto os = open_out(fs::path(out.string() + ".manifest.json"));
  os << m.dump(2) << '\n';
}

ProductWeights weights_for(const std::string& preset, std::size_t dim, int alpha, double gamma) {
  if (preset == "power") return ProductWeights::power_law(dim, alpha);
  if (preset == "constant") return ProductWeights::constant(dim, gamma);
  throw UsageError("unknown weights preset: " + preset);
}

void require_prime(std::uint64_t n) {
  if (!is_prime(n)) throw UsageError("N must be prime (got " + std::to_string(n) + ")");
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> x;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      x.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw UsageError("--point: not a number: '" + field + "'");
    }
  }
  if (x.empty()) throw UsageError("--point: empty");
  return x;
}

// Grid file: key = value lines, values comma separated; '#' starts a comment.
// Keys: d, alpha, N, lambda, M, lambda_scale.
SweepGrid read_grid_file(const std::string& path) {
  auto is = open_in(path);
  std::map<std::string, std::vector<std::string>> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("grid file line " + std::to_string(line_no) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::vector<std::string> values;
    std::stringstream ss(line.substr(eq + 1));
    for (std::string v; std::getline(ss, v, ',');) {
      if (auto t = trim(v); !t.empty()) values.push_back(t);
    }
    kv[trim(line.substr(0, eq))] = values;
  }
  if (kv.empty()) throw UsageError("grid file is empty: " + path);

  SweepGrid g;
  auto take = [&](const std::string& key, auto& out, auto convert) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    for (const auto& v : it->second) {
      try {
        out.push_back(convert(v));
      } catch (const std::exception&) {
        throw UsageError("grid file: bad value for " + key + ": " + v);
      }
    }
    kv.erase(it);
  };
  take("d", g.d, [](const std::string& v) { return static_cast<std::size_t>(std::stoull(v)); });
  take("alpha", g.alpha, [](const std::string& v) { return std::stoi(v); });
  take("N", g.n, [](const std::string& v) { return static_cast<std::uint64_t>(std::stoull(v)); });
  take("lambda", g.lambda, [](const std::string& v) { return std::stod(v); });
  take("M", g.m, [](const std::string& v) { return static_cast<std::uint64_t>(std::stod(v)); });
  std::vector<double> scale;
  take("lambda_scale", scale, [](const std::string& v) { return std::stod(v); });
  if (scale.size() > 1) throw UsageError("grid file: lambda_scale takes one value");
  if (!scale.empty()) g.lambda_scale = scale[0];
  if (!kv.empty()) throw UsageError("grid file: unknown key " + kv.begin()->first);
  if (g.d.empty() || g.alpha.empty() || g.n.empty() || g.m.empty() || (g.lambda.empty() && !g.lambda_scale)) {
    throw UsageError("grid file: d, alpha, N, M and lambda (or lambda_scale) are required");
  }
  return g;
}

void write_gnuplot(const fs::path& csv, const std::string& preset) {
  const fs::path gp(csv.string() + ".gp");
  auto os = open_out(gp);
  const bool vs_lambda = preset == "fig5";
  os << "# gnuplot script for " << csv.filename().string() << "\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set logscale xy\n"
     << "set xlabel '" << (vs_lambda ? "lambda" : "M") << "'\n"
     << "set ylabel 'MISE'\n"
     << "set terminal pngcairo size 800,600\n"
     << "set output '" << csv.filename().string() << ".png'\n"
     << "plot '" << csv.filename().string() << "' using " << (vs_lambda ? 4 : 5)
     << ":7:8 with yerrorlines title 'MISE'\n";
}

struct Common {
  unsigned threads = 1;
};

int run_cbc(std::uint64_t n, std::size_t dim, int alpha, const std::string& preset, double gamma,
            const std::string& out) {
  require_prime(n);
  if (alpha != 2 && alpha != 4) throw UsageError("--alpha must be 2 or 4");
  const auto w = weights_for(preset, dim, alpha, gamma);
  const auto r = cbc_construct(n, dim, alpha, w);
  const LatticeRule rule(n, r.z);
  const auto path = resolve_output(out, "cbc_N" + std::to_string(n) + "_d" + std::to_string(dim) + ".txt");
  {
    auto os = open_out(path);
    write_generating_vector(os, rule);
  }
  nlohmann::ordered_json params{{"n", n}, {"dim", dim}, {"alpha", alpha}, {"weights_preset", preset}};
  if (preset == "constant") params["gamma"] = gamma;
  write_manifest(path, "cbc", params, {path});
  std::cout << "z =";
  for (auto z : r.z) std::cout << ' ' << z;
  std::cout << "\ncriterion " << fmt17(r.criterion.back()) << "\nwrote " << path.string() << '\n';
  return 0;
}

int run_sample(std::size_t d, std::uint64_t m, std::uint64_t seed, std::uint64_t stream, const std::string& mode,
               const std::string& out) {
  if (d == 0 || m == 0) throw UsageError("--d and --m must be positive");
  SamplerMode sm;
  if (mode == "factorized") {
    sm = SamplerMode::factorized;
  } else if (mode == "joint") {
    sm = SamplerMode::joint;
  } else {
    throw UsageError("--mode must be factorized or joint");
  }
  const auto pts = sample(TestDensity(d), m, seed, stream, sm);
  const auto path = resolve_output(out, "sample_d" + std::to_string(d) + "_M" + std::to_string(m) + ".csv");
  {
    auto os = open_out(path);
    write_points_csv(os, pts);
  }
  write_manifest(path, "sample",
                 {{"d", d}, {"m", m}, {"seed", seed}, {"stream", stream}, {"mode", mode}}, {path});
  std::cout << "wrote " << m << " points to " << path.string() << '\n';
  return 0;
}

int run_fit(const std::string& csv, std::uint64_t n, const std::string& z_file, bool cbc, int alpha,
            double lambda, const std::string& out) {
  PointSet pts;
  {
    auto is = open_in(csv);
    try {
      pts = read_points_csv(is);
    } catch (const latkde::ParseError& e) {
      throw UsageError(csv + ": " + e.what());
    }
  }
  if (alpha != 2 && alpha != 4) throw UsageError("--alpha must be 2 or 4");
  if (!(lambda > 0.0)) throw UsageError("--lambda must be positive");
  std::optional<LatticeRule> rule;
  if (!z_file.empty()) {
    auto is = open_in(z_file);
    try {
      rule.emplace(read_generating_vector(is));
    } catch (const std::exception& e) {
      throw UsageError(z_file + ": " + e.what());
    }
    if (n != 0 && rule->size() != n) throw UsageError("--n does not match the generating-vector file");
  } else {
    if (!cbc) throw UsageError("one of --z-file or --cbc is required");
    require_prime(n);
    const auto w = ProductWeights::power_law(pts.dim(), alpha);
    rule.emplace(n, cbc_construct(n, pts.dim(), alpha, w).z);
  }
  if (rule->dim() != pts.dim()) throw UsageError("sample dimension does not match the generating vector");
  const KorobovKernel kernel(alpha, ProductWeights::power_law(pts.dim(), alpha));
  const auto b = assemble_rhs(*rule, kernel, pts);
  const auto est = fit_rhs(*rule, kernel, lambda, b);
  const auto path = resolve_output(out, "estimator.txt");
  {
    auto os = open_out(path);
    write_estimator(os, est);
  }
  std::vector<std::uint64_t> z(rule->generator().begin(), rule->generator().end());
  write_manifest(path, "fit",
                 {{"sample_csv", csv}, {"n", rule->size()}, {"z", z}, {"alpha", alpha}, {"lambda", lambda},
                  {"M", pts.size()}, {"d", pts.dim()}},
                 {path});
  std::cout << "sum_c " << fmt17(est.integral()) << '\n'
            << "galerkin_residual " << fmt17(galerkin_residual(est, b)) << '\n'
            << "wrote " << path.string() << '\n';
  return 0;
}

int run_eval(const std::string& est_path, const std::vector<std::string>& points, const std::string& csv) {
  DensityEstimator est = [&] {
    auto is = open_in(est_path);
    try {
      return read_estimator(is);
    } catch (const latkde::ParseError& e) {
      throw UsageError(est_path + ": " + e.what());
    }
  }();
  std::vector<std::vector<double>> xs;
  for (const auto& p : points) xs.push_back(parse_point(p));
  if (!csv.empty()) {
    auto is = open_in(csv);
    PointSet ps;
    try {
      ps = read_points_csv(is);
    } catch (const latkde::ParseError& e) {
      throw UsageError(csv + ": " + e.what());
    }
    for (std::size_t i = 0; i < ps.size(); ++i) xs.push_back(ps.point(i));
  }
  if (xs.empty()) throw UsageError("give --point or --points-csv");
  for (const auto& x : xs) {
    if (x.size() != est.dim()) throw UsageError("point dimension does not match the estimator");
    for (double v : x) {
      if (!(v >= 0.0 && v <= 1.0)) throw UsageError("points must lie in [0,1]^d");
    }
    std::cout << fmt17(est(x)) << '\n';
  }
  return 0;
}

struct MiseOptions {
  std::string preset;
  std::string grid_file;
  std::size_t d = 6;
  int alpha = 2;
  std::uint64_t seed = 42;
  std::uint64_t max_m = 1000000;
  std::size_t shifts = 100;
  std::size_t s_min = 8;
  std::size_t s_max = 512;
  double ci_ratio = 0.1;
  std::string out_csv;
  std::string out_jsonl;
  bool gnuplot = false;
};

int run_mise(const MiseOptions& o, const Common& common) {
  SweepGrid grid;
  if (!o.preset.empty() == !o.grid_file.empty()) throw UsageError("give exactly one of --preset or --grid-file");
  if (!o.preset.empty()) {
    try {
      grid = preset_grid(o.preset, o.d, o.alpha, o.max_m);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  } else {
    grid = read_grid_file(o.grid_file);
  }
  if (grid.size() == 0) throw UsageError("the grid has no points");

  MiseConfig base;
  base.seed = o.seed;
  base.shifts = o.shifts;
  base.s_min = o.s_min;
  base.s_max = o.s_max;
  base.ci_ratio_target = o.ci_ratio;
  base.threads = common.threads;
  // Surface bad harness settings as usage errors instead of one failure per grid point.
  for (const auto& cfg : grid.expand(base)) {
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }

  const std::string stem = o.preset.empty() ? fs::path(o.grid_file).stem().string() : o.preset;
  const auto csv_path = resolve_output(
      o.out_csv, "mise_" + stem + "_d" + std::to_string(o.d) + "_a" + std::to_string(o.alpha) + ".csv");
  const fs::path jsonl_path = o.out_jsonl.empty() ? fs::path(csv_path.string() + ".jsonl") : fs::path(o.out_jsonl);
  auto csv = open_out(csv_path);
  auto jsonl = open_out(jsonl_path);
  write_report_csv_header(csv);
  csv.flush();
  bool any_failed = false;
  const auto reports = sweep(grid, base, [&](const MiseReport& r) {
    write_report_csv_row(csv, r);
    write_report_jsonl(jsonl, r);
    csv.flush();
    jsonl.flush();
    std::cerr << "N=" << r.config.n << " lambda=" << fmt17(r.config.lambda) << " M=" << r.config.m;
    if (r.error.empty()) {
      std::cerr << " mise=" << fmt17(r.mise) << " +/- " << fmt17(r.ci_half_width) << " S=" << r.s_used
                << (r.ci_target_met ? "" : " (CI target not met)") << '\n';
    } else {
      any_failed = true;
      std::cerr << " failed: " << r.error << '\n';
    }
  });
  std::vector<fs::path> outputs{csv_path, jsonl_path};
  if (o.gnuplot) {
    write_gnuplot(csv_path, o.preset);
    outputs.emplace_back(csv_path.string() + ".gp");
  }
  nlohmann::ordered_json params{{"preset", o.preset},     {"grid_file", o.grid_file}, {"d", o.d},
                                {"alpha", o.alpha},       {"seed", o.seed},           {"max_m", o.max_m},
                                {"shifts", o.shifts},     {"s_min", o.s_min},         {"s_max", o.s_max},
                                {"ci_ratio", o.ci_ratio}, {"threads", common.threads}};
  write_manifest(csv_path, "mise", params, outputs);
  std::cout << "wrote " << reports.size() << " rows to " << csv_path.string() << '\n';
  return any_failed ? kExitRuntime : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice-based kernel density estimation with Korobov kernels", "latkde"};
  app.set_version_flag("--version", std::string(LATKDE_VERSION));
  app.set_config("--config", "", "Read key=value defaults from a file (command-line flags take precedence)");
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads for MISE replications")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // cbc
  auto* cbc = app.add_subcommand("cbc", "Component-by-component generating vector");
  std::uint64_t cbc_n = 0;
  std::size_t cbc_dim = 0;
  int cbc_alpha = 2;
  std::string cbc_preset = "power";
  double cbc_gamma = 1.0;
  std::string cbc_out;
  cbc->add_option("--n", cbc_n, "Number of lattice points (prime)")->required();
  cbc->add_option("--dim", cbc_dim, "Dimension")->required()->check(CLI::PositiveNumber);
  cbc->add_option("--alpha", cbc_alpha, "Smoothness (2 or 4)")->capture_default_str();
  cbc->add_option("--weights-preset", cbc_preset, "power (gamma_j = j^-alpha) or constant")->capture_default_str();
  cbc->add_option("--gamma", cbc_gamma, "Weight for the constant preset")->capture_default_str();
  cbc->add_option("--out", cbc_out, "Output file (default: $LATKDE_OUTPUT_DIR/cbc_N<n>_d<dim>.txt)");

  // sample
  auto* smp = app.add_subcommand("sample", "Draw from the benchmark density");
  std::size_t smp_d = 6;
  std::uint64_t smp_m = 10000, smp_seed = 42, smp_stream = 0;
  std::string smp_mode = "factorized", smp_out;
  smp->add_option("--d", smp_d, "Dimension")->capture_default_str();
  smp->add_option("--m", smp_m, "Number of points")->capture_default_str();
  smp->add_option("--seed", smp_seed, "Random seed")->capture_default_str();
  smp->add_option("--stream", smp_stream, "Random stream index")->capture_default_str();
  smp->add_option("--mode", smp_mode, "factorized or joint rejection")->capture_default_str();
  smp->add_option("--out", smp_out, "Output CSV (default: $LATKDE_OUTPUT_DIR/sample_d<d>_M<m>.csv)");

  // fit
  auto* fitc = app.add_subcommand("fit", "Fit an estimator to a sample");
  std::string fit_csv, fit_z, fit_out;
  std::uint64_t fit_n = 0;
  bool fit_cbc = false;
  int fit_alpha = 2;
  double fit_lambda = 0.01;
  fitc->add_option("--sample-csv", fit_csv, "Sample, one point per row")->required();
  fitc->add_option("--n", fit_n, "Number of lattice points (with --cbc)");
  auto* zopt = fitc->add_option("--z-file", fit_z, "Generating vector file");
  fitc->add_flag("--cbc", fit_cbc, "Construct the generating vector by CBC")->excludes(zopt);
  fitc->add_option("--alpha", fit_alpha, "Smoothness (2 or 4)")->capture_default_str();
  fitc->add_option("--lambda", fit_lambda, "Regularization parameter")->capture_default_str();
  fitc->add_option("--out", fit_out, "Estimator file (default: $LATKDE_OUTPUT_DIR/estimator.txt)");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a fitted estimator");
  std::string ev_est, ev_csv;
  std::vector<std::string> ev_points;
  ev->add_option("--estimator", ev_est, "Estimator file")->required();
  ev->add_option("--point", ev_points, "Comma-separated point, repeatable");
  ev->add_option("--points-csv", ev_csv, "CSV of points");

  // mise
  auto* ms = app.add_subcommand("mise", "Monte-Carlo MISE sweeps");
  MiseOptions mo;
  auto* popt = ms->add_option("--preset", mo.preset, "fig1, fig3, fig5 or fig7");
  ms->add_option("--grid-file", mo.grid_file, "Grid file (key = comma-separated values)")->excludes(popt);
  ms->add_option("--d", mo.d, "Dimension")->capture_default_str();
  ms->add_option("--alpha", mo.alpha, "Smoothness (2 or 4)")->capture_default_str();
  ms->add_option("--seed", mo.seed, "Random seed")->capture_default_str();
  ms->add_option("--max-m", mo.max_m, "Drop preset sample sizes above this")->capture_default_str();
  ms->add_option("--shifts", mo.shifts, "Number L of Sobol' shifts")->capture_default_str();
  ms->add_option("--s-min", mo.s_min, "First replication batch")->capture_default_str();
  ms->add_option("--s-max", mo.s_max, "Replication cap")->capture_default_str();
  ms->add_option("--ci-ratio", mo.ci_ratio, "Stop once the 95% half-width <= ratio * MISE")->capture_default_str();
  ms->add_option("--out-csv", mo.out_csv, "Report CSV (default: $LATKDE_OUTPUT_DIR/mise_<preset>_d<d>_a<alpha>.csv)");
  ms->add_option("--out-jsonl", mo.out_jsonl, "JSON-lines mirror (default: <csv>.jsonl)");
  ms->add_flag("--gnuplot", mo.gnuplot, "Also write a gnuplot script next to the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cbc) return run_cbc(cbc_n, cbc_dim, cbc_alpha, cbc_preset, cbc_gamma, cbc_out);
    if (*smp) return run_sample(smp_d, smp_m, smp_seed, smp_stream, smp_mode, smp_out);
    if (*fitc) return run_fit(fit_csv, fit_n, fit_z, fit_cbc, fit_alpha, fit_lambda, fit_out);
    if (*ev) return run_eval(ev_est, ev_points, ev_csv);
    if (*ms) return run_mise(mo, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
