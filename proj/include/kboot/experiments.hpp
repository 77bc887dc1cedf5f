#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kboot/bootstrap.hpp"
#include "kboot/matrix.hpp"
#include "kboot/rng.hpp"
#include "kboot/sampling.hpp"

namespace kboot::experiments {

// P-value calibration study: N repetitions of (fresh null data,
// bootstrap p-value per rank).
struct UniformityConfig {
  sampling::ModelSpec model;
  std::vector<std::size_t> kappas;
  std::size_t B = 500;
  std::size_t N = 500;
  sampling::WeightScheme weights;
  bootstrap::Method method = bootstrap::Method::multiplier;
  bootstrap::Sided sided = bootstrap::Sided::upper;
  SeedSpec seed;

  // n=100, p=150, B=1000, N=2000, kappa in {1,3,5,7,9,11}.
  static UniformityConfig paper_defaults();
};

struct UniformityReport {
  std::vector<std::size_t> kappas;
  std::vector<std::vector<double>> pvalues;  // [rank][repetition]
  std::vector<double> ks;                    // KS vs Uniform(0,1), per rank
  double wall_seconds = 0.0;                 // not serialized into artifacts
};

// Repetition r consumes the stream block
// seed.stream_id + r*(B+1) ... + B: data first, then one stream per
// replicate. Bitwise reproducible at any worker count.
UniformityReport run_uniformity(const UniformityConfig& cfg);

// Exact sup-distance between the empirical CDF of pvals and the
// Uniform(0,1) CDF, via order statistics.
double ks_uniform(std::span<const double> pvals);

// Exact two-sample Kolmogorov-Smirnov distance.
double two_sample_ks(std::span<const double> a, std::span<const double> b);

// Rejection-rate scan over (n, p, kappa, method) cells.
struct CoverageCell {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t kappa = 1;
  bootstrap::Method method = bootstrap::Method::multiplier;
};

struct CoverageConfig {
  sampling::ModelSpec::Family family = sampling::ModelSpec::Family::normal;
  double df = 10.0;
  sampling::CovarianceSpec cov;
  std::vector<CoverageCell> grid;
  double alpha = 0.05;
  std::size_t reps = 1000;
  std::size_t B = 500;
  sampling::WeightScheme weights;
  bootstrap::Sided sided = bootstrap::Sided::upper;
  SeedSpec seed;
};

struct CoverageCellResult {
  CoverageCell cell;
  double rejection_rate = 0.0;
  double abs_error = 0.0;  // |rate - alpha|
  double mc_se = 0.0;      // sqrt(alpha(1-alpha)/reps)
};

struct CoverageReport {
  std::vector<CoverageCellResult> cells;
  double alpha = 0.05;
  std::size_t reps = 0;
};

CoverageReport coverage_scan(const CoverageConfig& cfg);

// Levy concentration of the kappa-th largest coordinate of N(0, theta):
// estimates sup_x P(|Y_[kappa] - x| <= eps) by scanning a grid of pitch
// eps/10 over the sample range (a lower-bound estimator of the sup).
// When the diagonal of theta is constant the report carries the
// analytic bound 4*kappa*eps*(a_p_hat + 1)/sigma per epsilon.
struct LevyEntry {
  double epsilon = 0.0;
  double estimate = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool passed = true;
};

struct LevyReport {
  std::vector<LevyEntry> entries;
  double a_p_hat = 0.0;     // E max_j Y_j / sigma_j
  double abar_p_hat = 0.0;  // E max_j |Y_j| / sigma_j
  bool equal_variance = false;
  std::size_t draws = 0;
  bool passed = true;
};

LevyReport levy_concentration_estimate(const sampling::CovarianceSpec& cov,
                                       std::size_t p, std::size_t kappa,
                                       std::span<const double> eps_list,
                                       std::size_t draws, SeedSpec seed);

// Expected-maximum and concentration-tail checks for p i.i.d. N(0,tau^2):
// E[max] <= tau sqrt(2 ln p) and P(max >= E_hat[max] + r) <= exp(-r^2/2tau^2),
// each with 3 Monte Carlo standard errors of slack.
struct TailEntry {
  double r = 0.0;
  double estimate = 0.0;
  double bound = 0.0;
  double mc_se = 0.0;
  bool passed = true;
};

struct MaxInequalityReport {
  double max_mean_hat = 0.0;
  double max_mean_bound = 0.0;
  double max_mean_se = 0.0;
  bool max_mean_passed = true;
  std::vector<TailEntry> tails;
  std::size_t draws = 0;
  bool passed = true;
};

MaxInequalityReport gaussian_inequality_check(double tau, std::size_t p,
                                              std::size_t draws, SeedSpec seed);

// Two-sample KS distance between the kappa-th largest coordinates of
// N(0, Sigma1) and N(0, Sigma2), reported with the max entrywise
// covariance gap. The two samples use streams seed.stream_id and
// seed.stream_id + 1.
struct ComparisonReport {
  double ks = 0.0;
  double delta = 0.0;   // max_{j,k} |Sigma1 - Sigma2|
  double mc_se = 0.0;   // sqrt(2/draws), the two-sample KS noise scale
  std::size_t draws = 0;
};

ComparisonReport gaussian_comparison_check(const sampling::CovarianceSpec& cov1,
                                           const sampling::CovarianceSpec& cov2,
                                           std::size_t p, std::size_t kappa,
                                           std::size_t draws, SeedSpec seed);

}  // namespace kboot::experiments
