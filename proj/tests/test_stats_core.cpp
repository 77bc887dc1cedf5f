#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kboot/errors.hpp"
#include "kboot/rng.hpp"
#include "kboot/sampling.hpp"
#include "kboot/stats_core.hpp"

using namespace kboot;

namespace {

// Oracle: full ascending sort, index from the top.
double kth_largest_oracle(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end());
  return v[v.size() - k];
}

// Oracle: direct scan of the inf definition over the sorted draws,
// evaluating F_hat(t) = #{draws <= t}/B in doubles.
double quantile_scan_oracle(std::vector<double> draws, double gamma) {
  std::sort(draws.begin(), draws.end());
  const double b = double(draws.size());
  for (std::size_t m = 1; m <= draws.size(); ++m) {
    if (double(m) / b >= gamma) return draws[m - 1];
  }
  return draws.back();
}

}  // namespace

TEST_CASE("kth_largest basics") {
  CHECK(stats::kth_largest(std::vector{3.0, 1.0, 2.0}, 2) == 2.0);
  CHECK(stats::kth_largest(std::vector{5.0, 5.0, 5.0}, 3) == 5.0);
  CHECK_THROWS_AS(stats::kth_largest(std::vector{1.0}, 2), config_error);
  CHECK_THROWS_AS(stats::kth_largest(std::vector{1.0}, 0), config_error);
}

TEST_CASE("kth_largest matches the full-sort oracle and is monotone in k") {
  RandomStream rng({11, 0});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(8);
    for (double& x : v) x = rng.normal();
    for (std::size_t k = 1; k <= v.size(); ++k) {
      CHECK(stats::kth_largest(v, k) == kth_largest_oracle(v, k));
      if (k > 1) {
        CHECK(stats::kth_largest(v, k - 1) >= stats::kth_largest(v, k));
      }
    }
  }
}

TEST_CASE("empirical_quantile basics") {
  CHECK(stats::empirical_quantile(std::vector{1.0, 2.0, 3.0, 4.0}, 0.5) == 2.0);
  CHECK(stats::empirical_quantile(std::vector{7.5, 7.5, 7.5}, 0.123) == 7.5);
  CHECK_THROWS_AS(stats::empirical_quantile(std::vector<double>{}, 0.5),
                  config_error);
  CHECK_THROWS_AS(stats::empirical_quantile(std::vector{1.0}, 0.0), config_error);
  CHECK_THROWS_AS(stats::empirical_quantile(std::vector{1.0}, 1.0), config_error);
}

TEST_CASE("empirical_quantile equals the 95th order statistic of 100 draws") {
  std::vector<double> draws(100);
  for (int i = 0; i < 100; ++i) draws[i] = double(i + 1);
  // shuffle to make sure sorting is the implementation's job
  RandomStream rng({3, 3});
  for (std::size_t i = draws.size(); i > 1; --i) {
    std::swap(draws[i - 1], draws[rng.next_below(i)]);
  }
  CHECK(stats::empirical_quantile(draws, 0.95) == 95.0);
  CHECK(stats::empirical_quantile(draws, 0.95) ==
        quantile_scan_oracle(draws, 0.95));
}

TEST_CASE("empirical_quantile agrees with the scan oracle on awkward gammas") {
  RandomStream rng({17, 1});
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t b = 1 + std::size_t(rng.next_below(40));
    std::vector<double> draws(b);
    for (double& d : draws) d = rng.normal();
    for (double gamma : {0.05, 0.2, 1.0 / 3.0, 0.5, 0.7, 0.95, 0.999}) {
      CHECK(stats::empirical_quantile(draws, gamma) ==
            quantile_scan_oracle(draws, gamma));
    }
  }
}

TEST_CASE("empirical_quantile inf property and monotonicity") {
  RandomStream rng({23, 9});
  std::vector<double> draws(37);
  for (double& d : draws) d = rng.normal();
  double prev = -1e300;
  for (double gamma : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const double q = stats::empirical_quantile(draws, gamma);
    CHECK(q >= prev);
    prev = q;
    // the quantile is an element of the draws
    CHECK(std::count(draws.begin(), draws.end(), q) > 0);
    // fraction of draws <= q reaches gamma, and no smaller draw does
    const double frac =
        double(std::count_if(draws.begin(), draws.end(),
                             [&](double d) { return d <= q; })) /
        double(draws.size());
    CHECK(frac >= gamma);
    double below = -1e300;
    for (double d : draws) {
      if (d < q) below = std::max(below, d);
    }
    if (below > -1e300) {
      const double frac_below =
          double(std::count_if(draws.begin(), draws.end(),
                               [&](double d) { return d <= below; })) /
          double(draws.size());
      CHECK(frac_below < gamma);
    }
  }
}

TEST_CASE("center_columns examples and idempotence") {
  Matrix two_rows(2, 2);
  two_rows.row(0)[0] = 1.5;
  two_rows.row(0)[1] = -2.0;
  two_rows.row(1)[0] = 1.5;
  two_rows.row(1)[1] = -2.0;
  const auto centered = stats::center_columns(two_rows);
  for (double v : centered.values) CHECK(v == 0.0);

  Matrix pair(2, 1);
  pair(0, 0) = 0.0;
  pair(1, 0) = 2.0;
  const auto c = stats::center_columns(pair);
  CHECK(c(0, 0) == -1.0);
  CHECK(c(1, 0) == 1.0);

  RandomStream rng({31, 0});
  Matrix x(5, 3);
  for (double& v : x.values) v = 10.0 * rng.normal();
  const auto once = stats::center_columns(x);
  double max_abs = 0.0;
  for (double v : x.values) max_abs = std::max(max_abs, std::abs(v));
  for (std::size_t j = 0; j < once.cols; ++j) {
    double col_sum = 0.0;
    for (std::size_t i = 0; i < once.rows; ++i) col_sum += once(i, j);
    CHECK(std::abs(col_sum) <= 1e-10 * double(once.rows) * max_abs);
  }
  const auto twice = stats::center_columns(once);
  for (std::size_t i = 0; i < once.values.size(); ++i) {
    CHECK(std::abs(twice.values[i] - once.values[i]) <= 1e-12 * (1.0 + max_abs));
  }
}

TEST_CASE("empirical_covariance uses divisor n") {
  Matrix pair(2, 1);
  pair(0, 0) = -1.0;
  pair(1, 0) = 1.0;
  const auto cov = stats::empirical_covariance(pair);
  CHECK(cov(0, 0) == 1.0);  // (1 + 1)/2

  Matrix same(3, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    same(i, 0) = 4.0;
    same(i, 1) = -1.0;
  }
  const auto zero = stats::empirical_covariance(same);
  for (double v : zero.values) CHECK(v == 0.0);

  Matrix single(1, 2);
  CHECK_THROWS_AS(stats::empirical_covariance(single), config_error);
}

TEST_CASE("empirical_covariance recovers an AR(1) target from samples") {
  const double rho = 0.5;
  const std::size_t n = 200, p = 3;
  const auto x = sampling::sample_model(
      {sampling::ModelSpec::Family::normal, 10.0,
       sampling::CovarianceSpec::ar1(rho), n, p},
      {99, 0});
  const auto cov = stats::empirical_covariance(x);
  const auto theta = sampling::CovarianceSpec::ar1(rho).materialize(p);
  const double tol = 5.0 / std::sqrt(double(n));
  for (std::size_t i = 0; i < p * p; ++i) {
    CHECK(std::abs(cov.values[i] - theta.values[i]) < tol);
  }
  // symmetric PSD: diagonal nonnegative, symmetry exact
  for (std::size_t i = 0; i < p; ++i) {
    CHECK(cov(i, i) >= 0.0);
    for (std::size_t j = 0; j < p; ++j) CHECK(cov(i, j) == cov(j, i));
  }
}

TEST_CASE("absolute_embedding examples and rank identity") {
  const auto e = stats::absolute_embedding(std::vector{1.0, -2.0});
  CHECK(e == std::vector{1.0, -2.0, -1.0, 2.0});
  CHECK(stats::kth_largest(e, 1) == 2.0);

  const auto z = stats::absolute_embedding(std::vector{0.0, 0.0, 0.0});
  CHECK(z.size() == 6);
  for (double v : z) CHECK(v == 0.0);

  RandomStream rng({41, 2});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(6);
    for (double& x : v) x = rng.normal();
    const auto emb = stats::absolute_embedding(v);
    std::vector<double> abs_v(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) abs_v[j] = std::abs(v[j]);
    for (std::size_t k = 1; k <= v.size(); ++k) {
      CHECK(stats::kth_largest(abs_v, k) == stats::kth_largest(emb, k));
    }
  }
}
