#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kboot/matrix.hpp"
#include "kboot/rng.hpp"
#include "kboot/sampling.hpp"

namespace kboot::bootstrap {

enum class Method { multiplier, empirical, gaussian_analog };
enum class Sided { upper, two_sided };

std::string method_name(Method m);
Method method_from_name(const std::string& name);
std::string sided_name(Sided s);
Sided sided_from_name(const std::string& name);

struct BootstrapSpec {
  Method method = Method::multiplier;
  sampling::WeightScheme weights;  // multiplier only
  std::size_t kappa = 1;
  std::size_t B = 1000;
  double alpha = 0.05;
  Sided sided = Sided::upper;
  SeedSpec seed;
};

// Replicate statistics of one bootstrap run. data_digest binds the
// draws to the matrix they were computed from.
struct BootstrapDraws {
  std::vector<double> values;
  BootstrapSpec spec;
  std::uint64_t data_digest = 0;
};

struct PValueReport {
  double statistic = 0.0;
  double p_value = 1.0;
  double critical_value = 0.0;
  bool reject = false;
  BootstrapSpec spec;
};

// T_kappa: kappa-th largest of the scaled column sums of the raw
// (uncentered) data; the tested null is mean zero. two_sided applies
// the (v,-v) embedding before ranking.
double observed_statistic(const Matrix& x, std::size_t kappa, Sided sided);

// One multiplier replicate: kappa-th largest of n^{-1/2} sum_i e_i Xc_i.
double multiplier_replicate(const Matrix& xc, std::span<const double> weights,
                            std::size_t kappa, Sided sided);

// One empirical-bootstrap replicate from resampled centered rows.
double empirical_replicate(const Matrix& xc, std::span<const std::size_t> idx,
                           std::size_t kappa, Sided sided);

// B replicate statistics. multiplier draws fresh weights per replicate,
// empirical fresh uniform index vectors, gaussian_analog one
// N(0, Sigma_hat) vector per replicate. Replicate b always consumes
// stream spec.seed.stream_id + b, so results are identical at any
// worker count and any scheduling.
BootstrapDraws run_bootstrap(const Matrix& x, const BootstrapSpec& spec);

// Same replicates, several ranks at once: result[k][b] is the statistic
// of replicate b at kappas[k]. Column sums are computed once per
// replicate, so this is how multi-rank experiments stay affordable.
// run_bootstrap(x, spec) equals run_bootstrap_multi(x, spec, {kappa})[0]
// draw for draw.
std::vector<std::vector<double>> run_bootstrap_multi(
    const Matrix& x, const BootstrapSpec& spec,
    std::span<const std::size_t> kappas, int workers);
std::vector<std::vector<double>> run_bootstrap_multi(
    const Matrix& x, const BootstrapSpec& spec,
    std::span<const std::size_t> kappas);

// (1/B) #{draws >= t}; inclusive comparison, so fully degenerate draws
// give 1, the conservative answer.
double p_value(double t, std::span<const double> draws);
double p_value(double t, const BootstrapDraws& draws);

// (1-alpha) quantile of the replicate distribution (inf-definition).
double critical_value(const BootstrapDraws& draws, double alpha);

// Full pipeline: observed statistic, replicates, p-value and critical
// value. Rejects H0: mu = 0 iff statistic > critical value. Testing
// mu = mu0 means subtracting mu0 from every row first.
PValueReport one_sample_mean_test(const Matrix& x, const BootstrapSpec& spec);

// FNV-1a over the shape and raw entry bytes.
std::uint64_t matrix_digest(const Matrix& x);

}  // namespace kboot::bootstrap
