// kboot command-line interface.
//
// Exit codes: 0 success, 1 validation-suite failure, 2 configuration
// error, 3 data error. stdout carries only the report; progress and
// diagnostics go to stderr. Every artifact embeds the fully resolved
// configuration, so re-running a command from its own header
// reproduces it byte for byte at any KBOOT_THREADS setting.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kboot/bootstrap.hpp"
#include "kboot/data_io.hpp"
#include "kboot/errors.hpp"
#include "kboot/experiments.hpp"
#include "kboot/parallel.hpp"
#include "kboot/report_json.hpp"
#include "kboot/smooth_kmax.hpp"
#include "kboot/version.hpp"

namespace {

namespace fs = std::filesystem;
using kboot::report::json;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

void log_stage(const std::string& msg) { std::cerr << "[kboot] " << msg << "\n"; }

void emit(const json& doc, const std::optional<std::string>& out_path) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw kboot::data_error("cannot write " + *out_path);
    out << text;
    log_stage("wrote " + *out_path);
  } else {
    std::cout << text;
  }
}

// Bootstrap flags shared by pvalue and test.
struct BootstrapFlags {
  std::size_t kappa = 1;
  std::string method = "multiplier";
  std::string weights = "gaussian";
  double beta_alpha = 0.5;
  double beta_beta = 1.5;
  std::size_t B = 1000;
  double alpha = 0.05;
  std::string sided = "upper";
  std::uint64_t seed = 0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--kappa", kappa, "rank of interest (1 = maximum)")
        ->capture_default_str();
    cmd.add_option("--method", method, "multiplier | empirical")
        ->capture_default_str();
    cmd.add_option("--weights", weights,
                   "gaussian | rademacher | mammen | std_beta")
        ->capture_default_str();
    cmd.add_option("--beta-alpha", beta_alpha, "std_beta first shape")
        ->capture_default_str();
    cmd.add_option("--beta-beta", beta_beta, "std_beta second shape")
        ->capture_default_str();
    cmd.add_option("--B", B, "bootstrap replicates")->capture_default_str();
    cmd.add_option("--alpha", alpha, "significance level")->capture_default_str();
    cmd.add_option("--sided", sided, "upper | two_sided")->capture_default_str();
    cmd.add_option("--seed", seed, "master seed (64-bit)")->capture_default_str();
  }

  kboot::sampling::WeightScheme scheme() const {
    auto s = kboot::sampling::weight_scheme_from_name(weights);
    if (s.kind == kboot::sampling::WeightScheme::Kind::std_beta) {
      s.alpha = beta_alpha;
      s.beta = beta_beta;
    }
    return s;
  }

  kboot::bootstrap::BootstrapSpec spec() const {
    kboot::bootstrap::BootstrapSpec spec;
    spec.method = kboot::bootstrap::method_from_name(method);
    spec.weights = scheme();
    spec.kappa = kappa;
    spec.B = B;
    spec.alpha = alpha;
    spec.sided = kboot::bootstrap::sided_from_name(sided);
    spec.seed = {seed, 0};
    if (spec.kappa < 1) throw kboot::config_error("--kappa must be at least 1");
    if (spec.B < 1) throw kboot::config_error("--B must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw kboot::config_error("--alpha must lie in (0,1)");
    }
    return spec;
  }

  json config() const {
    json j;
    j["kappa"] = kappa;
    j["method"] = method;
    j["weights"] = weights;
    if (weights == "std_beta") {
      j["beta_alpha"] = beta_alpha;
      j["beta_beta"] = beta_beta;
    }
    j["B"] = B;
    j["alpha"] = alpha;
    j["sided"] = sided;
    j["seed"] = seed;
    return j;
  }
};

struct ModelFlags {
  std::string model = "normal";
  double rho = 0.2;
  double df = 10.0;
  std::size_t n = 100;
  std::size_t p = 150;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--model", model, "normal | student_t")->capture_default_str();
    cmd.add_option("--rho", rho, "AR(1) correlation")->capture_default_str();
    cmd.add_option("--df", df, "student_t degrees of freedom")
        ->capture_default_str();
    cmd.add_option("--n", n, "sample size")->capture_default_str();
    cmd.add_option("--p", p, "dimension")->capture_default_str();
  }

  kboot::sampling::ModelSpec spec() const {
    kboot::sampling::ModelSpec spec;
    if (model == "normal") {
      spec.family = kboot::sampling::ModelSpec::Family::normal;
    } else if (model == "student_t") {
      spec.family = kboot::sampling::ModelSpec::Family::student_t;
    } else {
      throw kboot::config_error("unknown model: " + model);
    }
    spec.df = df;
    spec.cov = kboot::sampling::CovarianceSpec::ar1(rho);
    spec.n = n;
    spec.p = p;
    return spec;
  }

  json config() const {
    json j;
    j["model"] = model;
    j["rho"] = rho;
    if (model == "student_t") j["df"] = df;
    j["n"] = n;
    j["p"] = p;
    return j;
  }
};

kboot::Matrix matrix_from_table(const kboot::io::RawTable& table) {
  if (table.missing_count > 0) {
    throw kboot::data_error("data matrix has " +
                            std::to_string(table.missing_count) +
                            " missing values; impute first (see `kboot test`)");
  }
  kboot::Matrix m(table.rows, table.cols);
  m.values = table.values;
  if (!m.all_finite()) throw kboot::data_error("data matrix has non-finite entries");
  return m;
}

// ---- pvalue ----------------------------------------------------------------

int cmd_pvalue(const std::string& data_path, char delimiter, bool has_header,
               const BootstrapFlags& flags, const std::optional<std::string>& out) {
  const auto spec = flags.spec();  // flag validation precedes file access
  kboot::io::ReadOptions opts;
  opts.delimiter = delimiter;
  opts.has_header = has_header;
  log_stage("reading " + data_path);
  const auto table = kboot::io::read_table(data_path, opts);
  const auto x = matrix_from_table(table);
  log_stage("data: " + std::to_string(x.rows) + " x " + std::to_string(x.cols));

  log_stage("bootstrap: " + kboot::bootstrap::method_name(spec.method) +
            ", B=" + std::to_string(spec.B));
  const auto report = kboot::bootstrap::one_sample_mean_test(x, spec);

  json config = flags.config();
  config["data"] = data_path;
  config["delimiter"] = std::string(1, delimiter);
  config["header"] = has_header;
  json doc = kboot::report::make_header("pvalue", std::move(config));
  doc["report"] = kboot::report::to_json(report);
  emit(doc, out);
  return kExitOk;
}

// ---- test (tensor pipeline) --------------------------------------------------

int cmd_test(const std::string& data_path, char delimiter, bool has_header,
             std::size_t segments, std::size_t days, std::size_t windows,
             const std::vector<std::size_t>& window_slice,
             const std::string& impute_axis, const BootstrapFlags& flags,
             const std::optional<std::string>& out) {
  const auto spec = flags.spec();
  kboot::io::Axis axis;
  if (impute_axis == "column") {
    axis = kboot::io::Axis::column;
  } else if (impute_axis == "row") {
    axis = kboot::io::Axis::row;
  } else {
    throw kboot::config_error("--impute-axis must be 'column' or 'row'");
  }

  kboot::io::ReadOptions opts;
  opts.delimiter = delimiter;
  opts.has_header = has_header;
  log_stage("reading " + data_path);
  const auto table = kboot::io::read_table(data_path, opts);
  log_stage("missing rate: " + kboot::io::format_double(table.missing_rate()));
  const auto filled = kboot::io::impute_mean(table, axis);

  kboot::io::TensorSpec tensor;
  tensor.segments = segments;
  tensor.days = days;
  tensor.windows = windows;
  tensor.slice = window_slice;
  const auto x = kboot::io::slice_tensor(filled, tensor);
  log_stage("analysis matrix: " + std::to_string(x.rows) + " days x " +
            std::to_string(x.cols) + " segments");

  const auto report = kboot::bootstrap::one_sample_mean_test(x, spec);

  json config = flags.config();
  config["data"] = data_path;
  config["delimiter"] = std::string(1, delimiter);
  config["header"] = has_header;
  config["segments"] = segments;
  config["days"] = days;
  config["windows"] = windows;
  config["window_slice"] = window_slice;
  config["impute_axis"] = impute_axis;
  json doc = kboot::report::make_header("test", std::move(config));
  doc["missing_rate"] = table.missing_rate();
  doc["report"] = kboot::report::to_json(report);
  emit(doc, out);
  return kExitOk;
}

// ---- simulate ----------------------------------------------------------------

int cmd_simulate_data(const ModelFlags& model, std::uint64_t seed,
                      const std::string& out_path) {
  const auto x = kboot::sampling::sample_model(model.spec(), {seed, 0});
  json config = model.config();
  config["seed"] = seed;
  config["out"] = out_path;
  const json header = kboot::report::make_header("simulate", config);
  kboot::io::write_matrix_csv(out_path, x, {header.dump()});
  log_stage("wrote " + out_path);
  return kExitOk;
}

int cmd_simulate_tensor(std::size_t segments, std::size_t days,
                        std::size_t windows, double missing_rate, double shift,
                        std::uint64_t seed, const std::string& out_path) {
  const auto table = kboot::io::synthetic_tensor(segments, days, windows,
                                                 missing_rate, shift, {seed, 0});
  json config;
  config["tensor"] = true;
  config["segments"] = segments;
  config["days"] = days;
  config["windows"] = windows;
  config["missing_rate"] = missing_rate;
  config["shift"] = shift;
  config["seed"] = seed;
  config["out"] = out_path;
  const json header = kboot::report::make_header("simulate", config);
  kboot::io::write_table_csv(out_path, table, {header.dump()});
  log_stage("wrote " + out_path + " (missing cells: " +
            std::to_string(table.missing_count) + ")");
  return kExitOk;
}

// ---- uniformity ----------------------------------------------------------------

int cmd_uniformity(const ModelFlags& model, std::vector<std::size_t> kappas,
                   std::size_t B, std::size_t N, const std::string& weights,
                   const std::string& sided, std::uint64_t seed, bool paper_scale,
                   const std::string& out_dir) {
  ModelFlags resolved = model;
  if (paper_scale) {
    const auto defaults = kboot::experiments::UniformityConfig::paper_defaults();
    resolved.n = defaults.model.n;
    resolved.p = defaults.model.p;
    B = defaults.B;
    N = defaults.N;
  }
  kboot::experiments::UniformityConfig cfg;
  cfg.model = resolved.spec();
  cfg.kappas = kappas;
  cfg.B = B;
  cfg.N = N;
  cfg.weights = kboot::sampling::weight_scheme_from_name(weights);
  cfg.sided = kboot::bootstrap::sided_from_name(sided);
  cfg.seed = {seed, 0};

  json config = resolved.config();
  config["kappas"] = kappas;
  config["B"] = B;
  config["N"] = N;
  config["weights"] = weights;
  config["sided"] = sided;
  config["seed"] = seed;
  config["paper_scale"] = paper_scale;
  const json header = kboot::report::make_header("uniformity", config);

  log_stage("uniformity: N=" + std::to_string(N) + ", B=" + std::to_string(B) +
            ", workers=" + std::to_string(kboot::worker_count()));
  const auto report = kboot::experiments::run_uniformity(cfg);
  log_stage("done in " + std::to_string(report.wall_seconds) + " s");

  fs::create_directories(out_dir);
  const std::string header_line = header.dump();

  {
    std::ofstream out(fs::path(out_dir) / "pvalues.csv", std::ios::binary);
    if (!out) throw kboot::data_error("cannot write pvalues.csv");
    out << "# " << header_line << "\n";
    out << "kappa,rep,p_value\n";
    for (std::size_t k = 0; k < report.kappas.size(); ++k) {
      for (std::size_t r = 0; r < report.pvalues[k].size(); ++r) {
        out << report.kappas[k] << ',' << r << ','
            << kboot::io::format_double(report.pvalues[k][r]) << '\n';
      }
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "qq.csv", std::ios::binary);
    if (!out) throw kboot::data_error("cannot write qq.csv");
    out << "# " << header_line << "\n";
    out << "kappa,theoretical_q,sample_q\n";
    for (std::size_t k = 0; k < report.kappas.size(); ++k) {
      auto sorted = report.pvalues[k];
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double theo = (double(i) + 0.5) / double(sorted.size());
        out << report.kappas[k] << ',' << kboot::io::format_double(theo) << ','
            << kboot::io::format_double(sorted[i]) << '\n';
      }
    }
  }
  json doc = header;
  doc["report"] = kboot::report::to_json(report);
  emit(doc, (fs::path(out_dir) / "summary.json").string());
  return kExitOk;
}

// ---- coverage ----------------------------------------------------------------

int cmd_coverage(const ModelFlags& model, const std::vector<std::size_t>& ns,
                 std::size_t p, std::size_t kappa,
                 const std::vector<std::string>& methods, double alpha,
                 std::size_t reps, std::size_t B, const std::string& weights,
                 std::uint64_t seed, const std::optional<std::string>& out) {
  kboot::experiments::CoverageConfig cfg;
  const auto model_spec = model.spec();
  cfg.family = model_spec.family;
  cfg.df = model_spec.df;
  cfg.cov = model_spec.cov;
  for (std::size_t n : ns) {
    for (const auto& m : methods) {
      cfg.grid.push_back({n, p, kappa, kboot::bootstrap::method_from_name(m)});
    }
  }
  cfg.alpha = alpha;
  cfg.reps = reps;
  cfg.B = B;
  cfg.weights = kboot::sampling::weight_scheme_from_name(weights);
  cfg.seed = {seed, 0};

  log_stage("coverage: " + std::to_string(cfg.grid.size()) + " cells x " +
            std::to_string(reps) + " reps");
  const auto report = kboot::experiments::coverage_scan(cfg);

  json config;
  config["model"] = model.model;
  config["rho"] = model.rho;
  if (model.model == "student_t") config["df"] = model.df;
  config["ns"] = ns;
  config["p"] = p;
  config["kappa"] = kappa;
  config["methods"] = methods;
  config["alpha"] = alpha;
  config["reps"] = reps;
  config["B"] = B;
  config["weights"] = weights;
  config["seed"] = seed;
  json doc = kboot::report::make_header("coverage", std::move(config));
  doc["report"] = kboot::report::to_json(report);
  emit(doc, out);
  return kExitOk;
}

// ---- validate ----------------------------------------------------------------

int cmd_validate(const std::string& suite, std::uint64_t seed, double bound_scale,
                 const std::optional<std::string>& out) {
  using kboot::experiments::gaussian_comparison_check;
  using kboot::experiments::gaussian_inequality_check;
  using kboot::experiments::levy_concentration_estimate;
  using kboot::sampling::CovarianceSpec;

  const bool all = suite == "all";
  if (!all && suite != "smooth" && suite != "anticoncentration" &&
      suite != "gaussian" && suite != "comparison") {
    throw kboot::config_error("unknown suite: " + suite);
  }

  // bound_scale < 1 tightens every bound so tests can force a failing
  // run. Checks consume stream ids 0, 1, 2, ... in listed order.
  json checks = json::array();
  bool all_passed = true;
  std::uint64_t stream = 0;
  const auto add = [&](json j, bool passed) {
    all_passed = all_passed && passed;
    checks.push_back(std::move(j));
  };
  const auto within = [&](double value, double bound) {
    return value <= bound * bound_scale;
  };

  if (all || suite == "smooth") {
    log_stage("suite: smooth");
    for (const double beta : {1.0, 5.0, 20.0}) {
      kboot::smooth::SmoothParams prm{beta, 3, 12};
      auto rep = kboot::smooth::verify_sandwich(100, prm, {seed, stream++});
      rep.passed = within(rep.max_violation, 1e-9);
      json j = kboot::report::to_json(rep);
      j["beta"] = beta;
      add(std::move(j), rep.passed);
    }
    {
      kboot::smooth::SmoothParams prm{2.0, 2, 8};
      for (auto rep :
           kboot::smooth::verify_gradient_identities(50, prm, {seed, stream})) {
        rep.passed = within(rep.max_violation, rep.bound);
        add(kboot::report::to_json(rep), rep.passed);
      }
      ++stream;
    }
    {
      kboot::smooth::SmoothParams prm{2.0, 2, 6};
      auto rep =
          kboot::smooth::verify_second_derivative_bound(20, prm, {seed, stream++});
      rep.passed = within(rep.max_violation, 1e-3);
      add(kboot::report::to_json(rep), rep.passed);
    }
  }
  if (all || suite == "anticoncentration") {
    log_stage("suite: anticoncentration");
    const std::vector<double> eps = {0.01, 0.02, 0.04};
    auto rep = levy_concentration_estimate(CovarianceSpec::ar1(0.5), 50, 3, eps,
                                           100000, {seed, stream++});
    bool passed = true;
    for (auto& e : rep.entries) {
      e.passed = within(e.estimate, e.bound);
      passed = passed && e.passed;
    }
    rep.passed = passed;
    add(kboot::report::to_json(rep), rep.passed);
  }
  if (all || suite == "gaussian") {
    log_stage("suite: gaussian");
    for (const std::size_t p : {std::size_t(10), std::size_t(100), std::size_t(1000)}) {
      auto rep = gaussian_inequality_check(1.0, p, 100000, {seed, stream++});
      bool passed =
          within(rep.max_mean_hat, rep.max_mean_bound + 3.0 * rep.max_mean_se);
      for (auto& t : rep.tails) {
        t.passed = within(t.estimate, t.bound + 3.0 * t.mc_se);
        passed = passed && t.passed;
      }
      rep.passed = passed;
      json j = kboot::report::to_json(rep);
      j["p"] = p;
      add(std::move(j), rep.passed);
    }
  }
  if (all || suite == "comparison") {
    log_stage("suite: comparison");
    const auto base = CovarianceSpec::ar1(0.5);
    const std::size_t p = 20, kappa = 2, draws = 100000;
    auto same = gaussian_comparison_check(base, base, p, kappa, draws,
                                          {seed, stream});
    stream += 2;
    const double same_bound = 2.0 * 1.36 / std::sqrt(double(draws));
    const bool same_ok = within(same.ks, same_bound);
    json j_same = kboot::report::to_json(same);
    j_same["bound"] = same_bound;
    j_same["passed"] = same_ok;
    add(std::move(j_same), same_ok);

    double prev_ks = same.ks;
    bool ladder_ok = true;
    json ladder = json::array();
    for (const double delta : {0.01, 0.04, 0.16}) {
      auto theta = base.materialize(p);
      for (std::size_t d = 0; d < p; ++d) theta(d, d) += delta;
      auto rep =
          gaussian_comparison_check(CovarianceSpec::explicit_matrix_of(theta),
                                    base, p, kappa, draws, {seed, stream});
      stream += 2;
      const bool step_ok = rep.ks >= prev_ks - 2.0 * rep.mc_se * bound_scale;
      ladder_ok = ladder_ok && step_ok;
      json j = kboot::report::to_json(rep);
      j["monotone_within_2se"] = step_ok;
      ladder.push_back(std::move(j));
      prev_ks = rep.ks;
    }
    add(json{{"check", "gaussian_comparison_ladder"},
             {"entries", ladder},
             {"passed", ladder_ok}},
        ladder_ok);
  }

  json config;
  config["suite"] = suite;
  config["seed"] = seed;
  config["bound_scale"] = bound_scale;
  json doc = kboot::report::make_header("validate", std::move(config));
  doc["checks"] = checks;
  doc["passed"] = all_passed;
  emit(doc, out);
  return all_passed ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap inference for the kth largest coordinate of "
               "high-dimensional sums"};
  app.set_version_flag("--version", std::string(kboot::kVersion));
  app.require_subcommand(1);

  auto* pvalue = app.add_subcommand(
      "pvalue", "bootstrap p-value for H0: mean = 0 on a data matrix");
  std::string pv_data;
  char pv_delim = ',';
  bool pv_header = false;
  BootstrapFlags pv_flags;
  std::string pv_out;
  pvalue->add_option("--data", pv_data, "CSV of observations, one row each")
      ->required();
  pvalue->add_option("--delimiter", pv_delim, "field delimiter")
      ->capture_default_str();
  pvalue->add_flag("--header", pv_header, "first row is a header");
  pv_flags.add_to(*pvalue);
  pvalue->add_option("--out", pv_out, "write JSON here instead of stdout");

  auto* test = app.add_subcommand(
      "test", "tensor pipeline: impute, slice window(s), one-sample test");
  std::string t_data, t_axis, t_out;
  char t_delim = ',';
  bool t_header = false;
  std::size_t t_segments = 0, t_days = 0, t_windows = 0;
  std::vector<std::size_t> t_slice;
  BootstrapFlags t_flags;
  test->add_option("--data", t_data, "flat tensor CSV (see README for layout)")
      ->required();
  test->add_option("--delimiter", t_delim, "field delimiter")
      ->capture_default_str();
  test->add_flag("--header", t_header, "first row is a header");
  test->add_option("--segments", t_segments, "tensor axis 1")->required();
  test->add_option("--days", t_days, "tensor axis 2")->required();
  test->add_option("--windows", t_windows, "tensor axis 3")->required();
  test->add_option("--window", t_slice,
                   "0-based window index; give two for a difference test")
      ->required()
      ->expected(1, 2);
  test->add_option("--impute-axis", t_axis,
                   "mean-imputation axis: column | row (no default on purpose)")
      ->required();
  t_flags.add_to(*test);
  test->add_option("--out", t_out, "write JSON here instead of stdout");

  auto* simulate =
      app.add_subcommand("simulate", "generate synthetic data or tensor fixtures");
  ModelFlags sim_model;
  bool sim_tensor = false;
  std::size_t sim_segments = 214, sim_days = 61, sim_windows = 2;
  double sim_missing = 0.0129, sim_shift = 0.0;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  sim_model.add_to(*simulate);
  simulate->add_flag("--tensor", sim_tensor,
                     "emit a segments x days x windows tensor instead");
  simulate->add_option("--segments", sim_segments, "tensor axis 1")
      ->capture_default_str();
  simulate->add_option("--days", sim_days, "tensor axis 2")->capture_default_str();
  simulate->add_option("--windows", sim_windows, "tensor axis 3")
      ->capture_default_str();
  simulate->add_option("--missing-rate", sim_missing, "fraction of missing cells")
      ->capture_default_str();
  simulate->add_option("--shift", sim_shift, "mean shift added to the last window")
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "master seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "output CSV path")->required();

  auto* uniformity =
      app.add_subcommand("uniformity", "p-value calibration study under the null");
  ModelFlags u_model;
  std::vector<std::size_t> u_kappas = {1, 3, 5, 7, 9, 11};
  std::size_t u_B = 500, u_N = 500;
  std::string u_weights = "gaussian", u_sided = "upper", u_dir = "uniformity_out";
  std::uint64_t u_seed = 0;
  bool u_paper = false;
  u_model.add_to(*uniformity);
  uniformity->add_option("--kappas", u_kappas, "ranks, space separated")
      ->capture_default_str();
  uniformity->add_option("--B", u_B, "bootstrap replicates")->capture_default_str();
  uniformity->add_option("--N", u_N, "repetitions")->capture_default_str();
  uniformity->add_option("--weights", u_weights, "multiplier weight family")
      ->capture_default_str();
  uniformity->add_option("--sided", u_sided, "upper | two_sided")
      ->capture_default_str();
  uniformity->add_option("--seed", u_seed, "master seed")->capture_default_str();
  uniformity->add_flag("--paper-scale", u_paper,
                       "force n=100, p=150, B=1000, N=2000");
  uniformity->add_option("--out-dir", u_dir, "directory for CSV/JSON artifacts")
      ->capture_default_str();

  auto* coverage = app.add_subcommand(
      "coverage", "rejection-rate scan across sample sizes and methods");
  ModelFlags c_model;
  std::vector<std::size_t> c_ns = {50, 200, 800};
  std::size_t c_p = 50, c_kappa = 3, c_reps = 1000, c_B = 500;
  std::vector<std::string> c_methods = {"multiplier", "empirical",
                                        "gaussian_analog"};
  double c_alpha = 0.05;
  std::string c_weights = "gaussian", c_out;
  std::uint64_t c_seed = 0;
  c_model.add_to(*coverage);
  coverage->add_option("--ns", c_ns, "sample sizes")->capture_default_str();
  coverage->add_option("--grid-p", c_p, "dimension")->capture_default_str();
  coverage->add_option("--kappa", c_kappa, "rank")->capture_default_str();
  coverage->add_option("--methods", c_methods, "bootstrap methods")
      ->capture_default_str();
  coverage->add_option("--alpha", c_alpha, "significance level")
      ->capture_default_str();
  coverage->add_option("--reps", c_reps, "datasets per cell")->capture_default_str();
  coverage->add_option("--B", c_B, "bootstrap replicates")->capture_default_str();
  coverage->add_option("--weights", c_weights, "multiplier weight family")
      ->capture_default_str();
  coverage->add_option("--seed", c_seed, "master seed")->capture_default_str();
  coverage->add_option("--out", c_out, "write JSON here instead of stdout");

  auto* validate = app.add_subcommand(
      "validate", "numeric verification suites for the analytic bounds");
  std::string v_suite = "all", v_out;
  std::uint64_t v_seed = 0;
  double v_scale = 1.0;
  validate
      ->add_option("--suite", v_suite,
                   "smooth | anticoncentration | gaussian | comparison | all")
      ->capture_default_str();
  validate->add_option("--seed", v_seed, "master seed")->capture_default_str();
  validate->add_option("--bound-scale", v_scale,
                       "test hook: scale bounds (values < 1 force failures)")
      ->capture_default_str();
  validate->add_option("--out", v_out, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);

    const auto opt = [](const std::string& s) {
      return s.empty() ? std::optional<std::string>() : std::optional(s);
    };
    if (*pvalue) {
      return cmd_pvalue(pv_data, pv_delim, pv_header, pv_flags, opt(pv_out));
    }
    if (*test) {
      return cmd_test(t_data, t_delim, t_header, t_segments, t_days, t_windows,
                      t_slice, t_axis, t_flags, opt(t_out));
    }
    if (*simulate) {
      return sim_tensor
                 ? cmd_simulate_tensor(sim_segments, sim_days, sim_windows,
                                       sim_missing, sim_shift, sim_seed, sim_out)
                 : cmd_simulate_data(sim_model, sim_seed, sim_out);
    }
    if (*uniformity) {
      return cmd_uniformity(u_model, u_kappas, u_B, u_N, u_weights, u_sided,
                            u_seed, u_paper, u_dir);
    }
    if (*coverage) {
      return cmd_coverage(c_model, c_ns, c_p, c_kappa, c_methods, c_alpha,
                          c_reps, c_B, c_weights, c_seed, opt(c_out));
    }
    if (*validate) {
      return cmd_validate(v_suite, v_seed, v_scale, opt(v_out));
    }
    return kExitConfigError;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  } catch (const kboot::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const kboot::capacity_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
