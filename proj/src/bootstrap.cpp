#include "kboot/bootstrap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "kboot/errors.hpp"
#include "kboot/parallel.hpp"
#include "kboot/stats_core.hpp"

namespace kboot::bootstrap {

std::string method_name(Method m) {
  switch (m) {
    case Method::multiplier: return "multiplier";
    case Method::empirical: return "empirical";
    case Method::gaussian_analog: return "gaussian_analog";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "multiplier") return Method::multiplier;
  if (name == "empirical") return Method::empirical;
  if (name == "gaussian_analog") return Method::gaussian_analog;
  throw config_error("unknown bootstrap method: " + name);
}

std::string sided_name(Sided s) {
  return s == Sided::upper ? "upper" : "two_sided";
}

Sided sided_from_name(const std::string& name) {
  if (name == "upper") return Sided::upper;
  if (name == "two_sided") return Sided::two_sided;
  throw config_error("unknown sidedness: " + name);
}

namespace {

void check_rank(std::size_t kappa, std::size_t p) {
  if (kappa < 1 || kappa > p) {
    throw config_error("kappa " + std::to_string(kappa) +
                       " out of range for dimension " + std::to_string(p));
  }
}

// Ranks the scaled column sums in place. For two-sided statistics the
// (v,-v) embedding reduces to ranking |v|: the top p entries of the
// 2p-dimensional embedding are exactly the absolute values.
void rank_sums(std::span<double> sums, Sided sided,
               std::span<const std::size_t> kappas, std::span<double> out) {
  if (sided == Sided::two_sided) {
    for (double& v : sums) v = std::abs(v);
  }
  std::sort(sums.begin(), sums.end(), std::greater<>());
  for (std::size_t k = 0; k < kappas.size(); ++k) out[k] = sums[kappas[k] - 1];
}

double rank_sums_single(std::span<double> sums, Sided sided, std::size_t kappa) {
  double out;
  rank_sums(sums, sided, {&kappa, 1}, {&out, 1});
  return out;
}

}  // namespace

double observed_statistic(const Matrix& x, std::size_t kappa, Sided sided) {
  require_nonempty(x, "observed_statistic");
  check_rank(kappa, x.cols);
  std::vector<double> sums(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto row = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j) sums[j] += row[j];
  }
  const double scale = 1.0 / std::sqrt(double(x.rows));
  for (double& s : sums) s *= scale;
  return rank_sums_single(sums, sided, kappa);
}

double multiplier_replicate(const Matrix& xc, std::span<const double> weights,
                            std::size_t kappa, Sided sided) {
  require_nonempty(xc, "multiplier_replicate");
  check_rank(kappa, xc.cols);
  if (weights.size() != xc.rows) {
    throw config_error("multiplier_replicate: weight length mismatch");
  }
  std::vector<double> sums(xc.cols, 0.0);
  for (std::size_t i = 0; i < xc.rows; ++i) {
    const double w = weights[i];
    const auto row = xc.row(i);
    for (std::size_t j = 0; j < xc.cols; ++j) sums[j] += w * row[j];
  }
  const double scale = 1.0 / std::sqrt(double(xc.rows));
  for (double& s : sums) s *= scale;
  return rank_sums_single(sums, sided, kappa);
}

double empirical_replicate(const Matrix& xc, std::span<const std::size_t> idx,
                           std::size_t kappa, Sided sided) {
  require_nonempty(xc, "empirical_replicate");
  check_rank(kappa, xc.cols);
  if (idx.size() != xc.rows) {
    throw config_error("empirical_replicate: index length mismatch");
  }
  std::vector<double> sums(xc.cols, 0.0);
  for (std::size_t i : idx) {
    if (i >= xc.rows) throw config_error("empirical_replicate: index out of range");
    const auto row = xc.row(i);
    for (std::size_t j = 0; j < xc.cols; ++j) sums[j] += row[j];
  }
  const double scale = 1.0 / std::sqrt(double(xc.rows));
  for (double& s : sums) s *= scale;
  return rank_sums_single(sums, sided, kappa);
}

namespace {

void validate_spec(const BootstrapSpec& spec, std::size_t p) {
  if (spec.B < 1) throw config_error("bootstrap: B must be at least 1");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw config_error("bootstrap: alpha must lie in (0,1)");
  }
  check_rank(spec.kappa, p);
}

}  // namespace

std::vector<std::vector<double>> run_bootstrap_multi(
    const Matrix& x, const BootstrapSpec& spec,
    std::span<const std::size_t> kappas, int workers) {
  require_nonempty(x, "run_bootstrap");
  validate_spec(spec, x.cols);
  for (std::size_t k : kappas) check_rank(k, x.cols);

  const std::size_t n = x.rows;
  const std::size_t p = x.cols;
  const std::size_t B = spec.B;
  const double scale = 1.0 / std::sqrt(double(n));

  std::vector<std::vector<double>> draws(kappas.size());
  for (auto& d : draws) d.resize(B);
  const auto store = [&](std::size_t b, std::span<const double> stats) {
    for (std::size_t k = 0; k < kappas.size(); ++k) draws[k][b] = stats[k];
  };

  switch (spec.method) {
    case Method::multiplier: {
      const Matrix xc = stats::center_columns(x);
      parallel_for(
          B,
          [&](std::size_t b) {
            RandomStream rng({spec.seed.master_seed, spec.seed.stream_id + b});
            thread_local std::vector<double> weights, sums, stats;
            weights.resize(n);
            sums.assign(p, 0.0);
            stats.resize(kappas.size());
            sampling::sample_weights_into(spec.weights, rng, weights);
            for (std::size_t i = 0; i < n; ++i) {
              const double w = weights[i];
              const double* row = xc.values.data() + i * p;
              for (std::size_t j = 0; j < p; ++j) sums[j] += w * row[j];
            }
            for (double& s : sums) s *= scale;
            rank_sums(sums, spec.sided, kappas, stats);
            store(b, stats);
          },
          workers);
      break;
    }
    case Method::empirical: {
      const Matrix xc = stats::center_columns(x);
      parallel_for(
          B,
          [&](std::size_t b) {
            RandomStream rng({spec.seed.master_seed, spec.seed.stream_id + b});
            thread_local std::vector<double> sums, stats;
            sums.assign(p, 0.0);
            stats.resize(kappas.size());
            for (std::size_t i = 0; i < n; ++i) {
              const std::size_t pick = std::size_t(rng.next_below(n));
              const double* row = xc.values.data() + pick * p;
              for (std::size_t j = 0; j < p; ++j) sums[j] += row[j];
            }
            for (double& s : sums) s *= scale;
            rank_sums(sums, spec.sided, kappas, stats);
            store(b, stats);
          },
          workers);
      break;
    }
    case Method::gaussian_analog: {
      // Feasible Gaussian critical value: N(0, Sigma_hat) draws play the
      // role of the scaled sum, one per replicate, same stream budget.
      const sampling::GaussianSampler sampler(
          sampling::cholesky_lower(stats::empirical_covariance(x)));
      parallel_for(
          B,
          [&](std::size_t b) {
            RandomStream rng({spec.seed.master_seed, spec.seed.stream_id + b});
            thread_local std::vector<double> sums, stats;
            sums.resize(p);
            stats.resize(kappas.size());
            sampler.draw_row(rng, sums);
            rank_sums(sums, spec.sided, kappas, stats);
            store(b, stats);
          },
          workers);
      break;
    }
  }
  return draws;
}

std::vector<std::vector<double>> run_bootstrap_multi(
    const Matrix& x, const BootstrapSpec& spec,
    std::span<const std::size_t> kappas) {
  return run_bootstrap_multi(x, spec, kappas, worker_count());
}

BootstrapDraws run_bootstrap(const Matrix& x, const BootstrapSpec& spec) {
  auto multi = run_bootstrap_multi(x, spec, {&spec.kappa, 1});
  return {std::move(multi[0]), spec, matrix_digest(x)};
}

double p_value(double t, std::span<const double> draws) {
  if (draws.empty()) throw config_error("p_value: no draws");
  std::size_t count = 0;
  for (double d : draws) {
    if (d >= t) ++count;
  }
  return double(count) / double(draws.size());
}

double p_value(double t, const BootstrapDraws& draws) {
  return p_value(t, std::span<const double>(draws.values));
}

double critical_value(const BootstrapDraws& draws, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw config_error("critical_value: alpha must lie in (0,1)");
  }
  return stats::empirical_quantile(draws.values, 1.0 - alpha);
}

PValueReport one_sample_mean_test(const Matrix& x, const BootstrapSpec& spec) {
  if (spec.method == Method::gaussian_analog) {
    throw config_error(
        "one_sample_mean_test: method must be multiplier or empirical");
  }
  PValueReport report;
  report.spec = spec;
  report.statistic = observed_statistic(x, spec.kappa, spec.sided);
  const BootstrapDraws draws = run_bootstrap(x, spec);
  report.p_value = p_value(report.statistic, draws);
  report.critical_value = critical_value(draws, spec.alpha);
  report.reject = report.statistic > report.critical_value;
  return report;
}

std::uint64_t matrix_digest(const Matrix& x) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  const auto mix = [&hash](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (v >> (8 * byte)) & 0xffu;
      hash *= 0x100000001b3ull;
    }
  };
  mix(x.rows);
  mix(x.cols);
  for (double v : x.values) mix(std::bit_cast<std::uint64_t>(v));
  return hash;
}

}  // namespace kboot::bootstrap
