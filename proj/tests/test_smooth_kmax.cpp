#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "kboot/errors.hpp"
#include "kboot/rng.hpp"
#include "kboot/smooth_kmax.hpp"
#include "kboot/stats_core.hpp"

using namespace kboot;
using smooth::SmoothParams;
using smooth::SubsetFamily;

TEST_CASE("binomial_capped values and saturation") {
  CHECK(smooth::binomial_capped(5, 2, 1000) == 10);
  CHECK(smooth::binomial_capped(12, 6, 1000) == 924);
  CHECK(smooth::binomial_capped(4, 0, 1000) == 1);
  CHECK(smooth::binomial_capped(4, 5, 1000) == 0);
  CHECK(smooth::binomial_capped(100, 50, 2'000'000) == 2'000'001);  // saturated
  CHECK(smooth::binomial_capped(1'000'000'000, 3, 10) == 11);       // no overflow
}

TEST_CASE("subset enumeration is colexicographic and complete") {
  SubsetFamily family(4, 2);
  CHECK(family.size() == 6);
  std::vector<std::vector<std::size_t>> seen;
  family.for_each([&](std::span<const std::size_t> s) {
    seen.emplace_back(s.begin(), s.end());
  });
  const std::vector<std::vector<std::size_t>> expected = {
      {0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
  CHECK(seen == expected);
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS((SmoothParams{0.0, 1, 4}.validate()), config_error);
  CHECK_THROWS_AS((SmoothParams{1.0, 3, 4}.validate()), config_error);  // kappa cap
  CHECK_THROWS_AS((SmoothParams{1.0, 12, 60}.validate()), capacity_error);
  CHECK_NOTHROW((SmoothParams{1.0, 2, 4}.validate()));
}

TEST_CASE("g_subset closed forms") {
  const SmoothParams prm{1.0, 2, 3};
  const std::vector<double> zeros = {0.0, 0.0, 0.0};
  const std::vector<std::size_t> pair = {0, 1};
  CHECK(std::abs(smooth::g_subset(zeros, pair, prm)) < 1e-15);

  // singleton with kappa = 1 recovers the coordinate
  const SmoothParams prm1{2.5, 1, 3};
  const std::vector<double> x = {0.7, -1.3, 2.2};
  const std::vector<std::size_t> singleton = {2};
  CHECK(std::abs(smooth::g_subset(x, singleton, prm1) - 2.2) < 1e-15);

  // equal coordinates: c - (ln|A| - ln kappa)/beta
  const SmoothParams prm2{3.0, 2, 5};
  const std::vector<double> equal = {1.7, 1.7, 1.7, 1.7, 1.7};
  const std::vector<std::size_t> triple = {0, 2, 4};
  const double expect = 1.7 - (std::log(3.0) - std::log(2.0)) / 3.0;
  CHECK(std::abs(smooth::g_subset(equal, triple, prm2) - expect) < 1e-14);
}

TEST_CASE("smooth_kmax frozen values") {
  const std::vector<double> zeros2 = {0.0, 0.0};
  CHECK(std::abs(smooth::smooth_kmax(zeros2, {1.0, 1, 2}) -
                 0.6931471805599453) < 1e-12);
  const std::vector<double> zeros3 = {0.0, 0.0, 0.0};
  CHECK(std::abs(smooth::smooth_kmax(zeros3, {1.0, 2, 3}) -
                 1.0986122886681098) < 1e-12);
}

TEST_CASE("smooth_kmax and its gradient match the literal formulas") {
  // Brute-force oracle: evaluate the defining expressions directly,
  // without any max-shift stabilization (safe here because beta*x is
  // small). Subsets are enumerated independently by bitmask.
  const SmoothParams prm{1.5, 2, 6};
  RandomStream rng({53, 0});
  std::vector<double> x(6);
  for (int trial = 0; trial < 10; ++trial) {
    for (double& v : x) v = rng.normal();

    double tilde_g = 0.0;
    std::vector<double> grad_oracle(6, 0.0);
    for (unsigned mask = 0; mask < 64; ++mask) {
      if (__builtin_popcount(mask) != 2) continue;
      double inner = 0.0;
      for (std::size_t s = 0; s < 6; ++s) {
        if (mask & (1u << s)) inner += std::exp(-prm.beta * x[s]);
      }
      const double g =
          -std::log(inner) / prm.beta + std::log(2.0) / prm.beta;
      const double w = std::exp(prm.beta * g);
      tilde_g += w;
      for (std::size_t s = 0; s < 6; ++s) {
        if (mask & (1u << s)) {
          grad_oracle[s] += w * std::exp(-prm.beta * x[s]) / inner;
        }
      }
    }
    const double f_oracle = std::log(tilde_g) / prm.beta;
    for (double& g : grad_oracle) g /= tilde_g;

    CHECK(smooth::smooth_kmax(x, prm) == doctest::Approx(f_oracle).epsilon(1e-12));
    const auto grad = smooth::smooth_kmax_grad(x, prm);
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(grad[j] == doctest::Approx(grad_oracle[j]).epsilon(1e-10));
    }
  }
}

TEST_CASE("smooth_kmax survives large beta*x without overflow") {
  const std::vector<double> x = {400.0, -350.0, 10.0, 0.0};
  const SmoothParams prm{5.0, 2, 4};
  const double f = smooth::smooth_kmax(x, prm);
  CHECK(std::isfinite(f));
  const double gap = f - stats::kth_largest(x, 2);
  CHECK(gap >= 0.0);
  CHECK(gap <= (std::log(2.0) + std::log(6.0)) / 5.0 + 1e-12);
}

TEST_CASE("sandwich, translation, permutation and monotonicity properties") {
  const SmoothParams prm{4.0, 2, 7};
  const double bound =
      (std::log(2.0) + std::log(double(smooth::binomial_capped(7, 2, 100)))) / 4.0;
  RandomStream rng({51, 0});
  std::vector<double> x(7);
  for (int trial = 0; trial < 30; ++trial) {
    for (double& v : x) v = rng.normal();
    const double f = smooth::smooth_kmax(x, prm);
    const double gap = f - stats::kth_largest(x, 2);
    CHECK(gap >= -1e-12);
    CHECK(gap <= bound + 1e-12);

    // translation equivariance
    const double c = rng.normal();
    std::vector<double> shifted = x;
    for (double& v : shifted) v += c;
    CHECK(std::abs(smooth::smooth_kmax(shifted, prm) - (f + c)) < 1e-10);

    // permutation invariance (rotate)
    std::vector<double> rotated(x.begin() + 1, x.end());
    rotated.push_back(x.front());
    CHECK(std::abs(smooth::smooth_kmax(rotated, prm) - f) < 1e-12);

    // componentwise monotonicity
    std::vector<double> bumped = x;
    bumped[std::size_t(rng.next_below(7))] += std::abs(rng.normal());
    CHECK(smooth::smooth_kmax(bumped, prm) >= f - 1e-12);
  }
}

TEST_CASE("gradient frozen values and identities") {
  const std::vector<double> zeros3 = {0.0, 0.0, 0.0};
  const auto uniform = smooth::smooth_kmax_grad(zeros3, {1.0, 1, 3});
  for (double g : uniform) CHECK(std::abs(g - 1.0 / 3.0) < 1e-14);

  const std::vector<double> two = {10.0, 0.0};
  const auto pi = smooth::smooth_kmax_grad(two, {1.0, 1, 2});
  const double expect = std::exp(10.0) / (std::exp(10.0) + 1.0);
  CHECK(std::abs(pi[0] - expect) < 1e-12);
  CHECK(std::abs(pi[0] + pi[1] - 1.0) < 1e-12);
}

TEST_CASE("gradient matches central finite differences") {
  const SmoothParams prm{2.0, 2, 6};
  RandomStream rng({52, 0});
  std::vector<double> x(6), shifted(6);
  for (int trial = 0; trial < 10; ++trial) {
    for (double& v : x) v = rng.normal();
    const auto grad = smooth::smooth_kmax_grad(x, prm);
    double sum = 0.0;
    for (double g : grad) {
      CHECK(g >= -1e-12);
      sum += g;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    for (std::size_t j = 0; j < x.size(); ++j) {
      shifted = x;
      shifted[j] = x[j] + 1e-5;
      const double up = smooth::smooth_kmax(shifted, prm);
      shifted[j] = x[j] - 1e-5;
      const double down = smooth::smooth_kmax(shifted, prm);
      const double fd = (up - down) / 2e-5;
      CHECK(std::abs(fd - grad[j]) <= 1e-4 * std::max(std::abs(grad[j]), 1e-6));
    }
  }
}

TEST_CASE("verify_sandwich reports zero violations") {
  const auto rep = smooth::verify_sandwich(100, {5.0, 3, 12}, {61, 0});
  CHECK(rep.passed);
  CHECK(rep.max_violation <= 1e-9);
  CHECK(rep.trials == 100);

  // kappa = 1: bound reduces to ln(C(p,1))/beta = ln(p)/beta
  const auto rep1 = smooth::verify_sandwich(50, {2.0, 1, 9}, {62, 0});
  CHECK(rep1.passed);
  CHECK(std::abs(rep1.bound - std::log(9.0) / 2.0) < 1e-14);
}

TEST_CASE("constant vectors attain the ln C(p,kappa) gap exactly") {
  const SmoothParams prm{3.0, 2, 6};
  const std::vector<double> flat(6, 0.37);
  const double gap = smooth::smooth_kmax(flat, prm) - 0.37;
  const double expect = std::log(double(smooth::binomial_capped(6, 2, 100))) / 3.0;
  CHECK(std::abs(gap - expect) < 1e-12);
}

TEST_CASE("second derivative bound holds with numeric slack") {
  SUBCASE("kappa 2") {
    const auto rep = smooth::verify_second_derivative_bound(20, {2.0, 2, 6}, {63, 0});
    CHECK(rep.passed);
    CHECK(rep.bound == 8.0);
  }
  SUBCASE("kappa 1 soft-max special case") {
    const auto rep = smooth::verify_second_derivative_bound(10, {2.0, 1, 6}, {64, 0});
    CHECK(rep.passed);
  }
  SUBCASE("large beta scales linearly") {
    const auto rep =
        smooth::verify_second_derivative_bound(10, {50.0, 2, 6}, {65, 0});
    CHECK(rep.passed);
    CHECK(rep.bound == 200.0);
  }
}
