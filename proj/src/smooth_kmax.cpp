#include "kboot/smooth_kmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kboot/errors.hpp"
#include "kboot/stats_core.hpp"

namespace kboot::smooth {

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // result holds C(n-k+i-1, i-1); the product below divides exactly.
    const std::size_t numerator = n - k + i;
    if (numerator > std::numeric_limits<std::size_t>::max() / result) {
      return cap + 1;
    }
    result = result * numerator / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

void SmoothParams::validate() const {
  if (!(beta > 0.0)) throw config_error("SmoothParams: beta must be positive");
  if (p == 0) throw config_error("SmoothParams: p must be positive");
  if (kappa < 1 || kappa > (p + 1) / 2) {
    throw config_error("SmoothParams: kappa must lie in [1, floor((p+1)/2)]");
  }
  if (binomial_capped(p, kappa, kSubsetCap) > kSubsetCap) {
    throw capacity_error("SmoothParams: C(p,kappa) exceeds the enumeration cap of " +
                         std::to_string(kSubsetCap));
  }
}

SubsetFamily::SubsetFamily(std::size_t p, std::size_t kappa) : p_(p), kappa_(kappa) {
  if (kappa < 1 || kappa > p) throw config_error("SubsetFamily: invalid kappa");
  count_ = binomial_capped(p, kappa, kSubsetCap);
  if (count_ > kSubsetCap) {
    throw capacity_error("SubsetFamily: C(p,kappa) exceeds the enumeration cap");
  }
}

namespace {

// Max-shifted pieces of one subset term: m = max_{s in A}(-beta x_s)
// and denom = sum_{s in A} exp(-beta x_s - m). Then
// beta * g_A = ln(kappa) - m - ln(denom).
struct SubsetTerm {
  double shift;
  double denom;
};

SubsetTerm subset_term(std::span<const double> x, std::span<const std::size_t> subset,
                       double beta) {
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t s : subset) shift = std::max(shift, -beta * x[s]);
  double denom = 0.0;
  for (std::size_t s : subset) denom += std::exp(-beta * x[s] - shift);
  return {shift, denom};
}

}  // namespace

double g_subset(std::span<const double> x, std::span<const std::size_t> subset,
                const SmoothParams& params) {
  if (subset.empty()) throw config_error("g_subset: empty subset");
  for (std::size_t s : subset) {
    if (s >= x.size()) throw config_error("g_subset: subset index out of range");
  }
  const auto term = subset_term(x, subset, params.beta);
  return (std::log(double(params.kappa)) - term.shift - std::log(term.denom)) /
         params.beta;
}

double smooth_kmax(std::span<const double> x, const SmoothParams& params) {
  params.validate();
  if (x.size() != params.p) throw config_error("smooth_kmax: length mismatch");
  const double beta = params.beta;
  const double log_kappa = std::log(double(params.kappa));
  const SubsetFamily family(params.p, params.kappa);

  // Streaming two-pass logsumexp over beta*g_A: max first, then the
  // shifted sum. Avoids storing C(p,kappa) terms.
  double top = -std::numeric_limits<double>::infinity();
  family.for_each([&](std::span<const std::size_t> subset) {
    const auto term = subset_term(x, subset, beta);
    top = std::max(top, log_kappa - term.shift - std::log(term.denom));
  });
  double total = 0.0;
  family.for_each([&](std::span<const std::size_t> subset) {
    const auto term = subset_term(x, subset, beta);
    total += std::exp(log_kappa - term.shift - std::log(term.denom) - top);
  });
  return (top + std::log(total)) / beta;
}

std::vector<double> smooth_kmax_grad(std::span<const double> x,
                                     const SmoothParams& params) {
  params.validate();
  if (x.size() != params.p) throw config_error("smooth_kmax_grad: length mismatch");
  const double beta = params.beta;
  const double log_kappa = std::log(double(params.kappa));
  const SubsetFamily family(params.p, params.kappa);

  double top = -std::numeric_limits<double>::infinity();
  family.for_each([&](std::span<const std::size_t> subset) {
    const auto term = subset_term(x, subset, beta);
    top = std::max(top, log_kappa - term.shift - std::log(term.denom));
  });

  // pi_j = sum_{A containing j} w_A * sigma_{j,A} / sum_A w_A with
  // w_A = exp(beta g_A - top) and sigma_{j,A} the within-subset softmin
  // weight exp(-beta x_j - shift_A) / denom_A.
  std::vector<double> grad(params.p, 0.0);
  double total = 0.0;
  family.for_each([&](std::span<const std::size_t> subset) {
    const auto term = subset_term(x, subset, beta);
    const double w = std::exp(log_kappa - term.shift - std::log(term.denom) - top);
    total += w;
    for (std::size_t s : subset) {
      grad[s] += w * std::exp(-beta * x[s] - term.shift) / term.denom;
    }
  });
  for (double& g : grad) g /= total;
  return grad;
}

CheckReport verify_sandwich(std::size_t trials, const SmoothParams& params,
                            SeedSpec seed) {
  params.validate();
  const double subsets = double(binomial_capped(params.p, params.kappa, kSubsetCap));
  const double bound =
      (std::log(double(params.kappa)) + std::log(subsets)) / params.beta;
  const double coarse_bound =
      double(params.kappa) * std::log(double(params.p)) / params.beta;

  double worst = 0.0;
  // The tighter bound must itself sit below kappa*ln(p)/beta; this part
  // is deterministic in (p, kappa, beta).
  worst = std::max(worst, bound - coarse_bound);

  RandomStream rng(seed);
  std::vector<double> x(params.p);
  for (std::size_t t = 0; t < trials; ++t) {
    for (double& v : x) v = rng.normal();
    const double gap = smooth_kmax(x, params) -
                       kboot::stats::kth_largest(x, params.kappa);
    worst = std::max(worst, -gap);
    worst = std::max(worst, gap - bound);
  }
  return {"smooth_sandwich", trials, worst, bound, worst <= 1e-9};
}

std::vector<CheckReport> verify_gradient_identities(std::size_t trials,
                                                    const SmoothParams& params,
                                                    SeedSpec seed) {
  params.validate();
  constexpr double kStep = 1e-5;
  constexpr double kRelTol = 1e-4;
  constexpr double kRelFloor = 1e-6;

  double worst_sum = 0.0;
  double worst_neg = 0.0;
  double worst_rel = 0.0;

  RandomStream rng(seed);
  std::vector<double> x(params.p);
  std::vector<double> shifted(params.p);
  for (std::size_t t = 0; t < trials; ++t) {
    for (double& v : x) v = rng.normal();
    const auto grad = smooth_kmax_grad(x, params);

    double sum = 0.0;
    for (double g : grad) {
      sum += g;
      worst_neg = std::max(worst_neg, -g);
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));

    for (std::size_t j = 0; j < params.p; ++j) {
      shifted.assign(x.begin(), x.end());
      shifted[j] = x[j] + kStep;
      const double up = smooth_kmax(shifted, params);
      shifted[j] = x[j] - kStep;
      const double down = smooth_kmax(shifted, params);
      const double fd = (up - down) / (2.0 * kStep);
      const double rel =
          std::abs(fd - grad[j]) / std::max(std::abs(grad[j]), kRelFloor);
      worst_rel = std::max(worst_rel, rel);
    }
  }
  return {
      {"grad_unit_sum", trials, worst_sum, 1e-9, worst_sum <= 1e-9},
      {"grad_nonnegative", trials, worst_neg, 1e-12, worst_neg <= 1e-12},
      {"grad_finite_difference", trials, worst_rel, kRelTol, worst_rel <= kRelTol},
  };
}

CheckReport verify_second_derivative_bound(std::size_t samples,
                                           const SmoothParams& params,
                                           SeedSpec seed) {
  params.validate();
  constexpr double kStep = 1e-5;
  constexpr double kSlack = 1e-3;
  const double bound = 4.0 * params.beta;

  double worst = 0.0;
  RandomStream rng(seed);
  std::vector<double> x(params.p);
  std::vector<double> shifted(params.p);
  for (std::size_t t = 0; t < samples; ++t) {
    for (double& v : x) v = rng.normal();
    double abs_sum = 0.0;
    for (std::size_t k = 0; k < params.p; ++k) {
      shifted.assign(x.begin(), x.end());
      shifted[k] = x[k] + kStep;
      const auto up = smooth_kmax_grad(shifted, params);
      shifted[k] = x[k] - kStep;
      const auto down = smooth_kmax_grad(shifted, params);
      for (std::size_t j = 0; j < params.p; ++j) {
        abs_sum += std::abs((up[j] - down[j]) / (2.0 * kStep));
      }
    }
    worst = std::max(worst, abs_sum - bound);
  }
  return {"hessian_abs_sum", samples, std::max(worst, 0.0), bound,
          worst <= kSlack};
}

}  // namespace kboot::smooth
