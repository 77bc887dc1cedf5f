#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kboot/rng.hpp"

namespace kboot::smooth {

// Hard cap on the number of enumerated subsets. The smooth kth-max is
// a verification device, never part of the bootstrap hot path, so
// refusing huge enumerations is the right failure mode.
inline constexpr std::size_t kSubsetCap = 2'000'000;

// Smoothing level beta and rank kappa for the smooth approximation of
// the kappa-th largest coordinate of a p-vector.
struct SmoothParams {
  double beta = 1.0;
  std::size_t kappa = 1;
  std::size_t p = 0;

  // Throws config_error / capacity_error when invalid: beta > 0,
  // 1 <= kappa <= floor((p+1)/2), C(p,kappa) within the cap.
  void validate() const;
};

// C(n,k), saturating at cap+1 instead of overflowing.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap);

// All kappa-element subsets of {0,...,p-1} in colexicographic order
// (sorted by largest element, then recursively). Enumeration is
// streamed; nothing is materialized.
class SubsetFamily {
 public:
  SubsetFamily(std::size_t p, std::size_t kappa);

  std::size_t size() const { return count_; }
  std::size_t p() const { return p_; }
  std::size_t kappa() const { return kappa_; }

  // visit(subset) for every subset, as a strictly increasing index span.
  template <typename Visit>
  void for_each(Visit&& visit) const {
    std::vector<std::size_t> c(kappa_);
    for (std::size_t i = 0; i < kappa_; ++i) c[i] = i;
    for (;;) {
      visit(std::span<const std::size_t>(c));
      std::size_t i = 0;
      while (i < kappa_ && c[i] + 1 == (i + 1 < kappa_ ? c[i + 1] : p_)) ++i;
      if (i == kappa_) return;
      ++c[i];
      for (std::size_t r = 0; r < i; ++r) c[r] = r;
    }
  }

 private:
  std::size_t p_;
  std::size_t kappa_;
  std::size_t count_;
};

// Soft minimum over the subset A shifted so that a singleton recovers
// the coordinate itself: (ln kappa - logsumexp_{s in A}(-beta x_s)) / beta.
double g_subset(std::span<const double> x, std::span<const std::size_t> subset,
                const SmoothParams& params);

// Smooth over-approximation of the kappa-th largest entry:
// beta^{-1} * logsumexp over all kappa-subsets of beta * g_subset.
// Lies within [x_[kappa], x_[kappa] + (ln kappa + ln C(p,kappa))/beta].
double smooth_kmax(std::span<const double> x, const SmoothParams& params);

// Analytic gradient of smooth_kmax; entries are nonnegative and sum to 1.
std::vector<double> smooth_kmax_grad(std::span<const double> x,
                                     const SmoothParams& params);

// One verification outcome. max_violation is how far the worst tested
// point exceeded the stated bound (0 when the property held everywhere);
// `bound` records the tolerance or analytic bound the check ran against.
struct CheckReport {
  std::string check;
  std::size_t trials = 0;
  double max_violation = 0.0;
  double bound = 0.0;
  bool passed = false;
};

// Sandwich property on standard normal test points: 0 <= F - x_[kappa]
// <= (ln kappa + ln C(p,kappa))/beta <= kappa ln(p)/beta, with violations
// beyond 1e-9 reported, never thrown.
CheckReport verify_sandwich(std::size_t trials, const SmoothParams& params,
                            SeedSpec seed);

// Gradient identities at random points: unit sum (1e-9), nonnegativity
// (-1e-12), and agreement with central finite differences of
// smooth_kmax at step 1e-5 within 1e-4 relative error (components
// smaller than 1e-6 are compared against that floor).
std::vector<CheckReport> verify_gradient_identities(std::size_t trials,
                                                    const SmoothParams& params,
                                                    SeedSpec seed);

// Finite-difference estimate of sum_{j,k} |d2 F / dx_j dx_k| against the
// 4*beta bound, with 1e-3 numeric slack.
CheckReport verify_second_derivative_bound(std::size_t samples,
                                           const SmoothParams& params,
                                           SeedSpec seed);

}  // namespace kboot::smooth
