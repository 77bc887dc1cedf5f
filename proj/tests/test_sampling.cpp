#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "kboot/errors.hpp"
#include "kboot/sampling.hpp"
#include "kboot/stats_core.hpp"

using namespace kboot;
using sampling::CovarianceSpec;
using sampling::ModelSpec;
using sampling::WeightScheme;

namespace {

struct Moments {
  double mean, var, third;
};

Moments sample_moments(const std::vector<double>& v) {
  double s1 = 0, s2 = 0, s3 = 0;
  for (double x : v) {
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
  }
  const double n = double(v.size());
  return {s1 / n, s2 / n - (s1 / n) * (s1 / n), s3 / n};
}

}  // namespace

TEST_CASE("cholesky factors AR(1) and rejects indefinite matrices") {
  const auto theta = CovarianceSpec::ar1(0.8).materialize(4);
  const auto lower = sampling::cholesky_lower(theta);
  // L L^T == theta
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += lower(i, k) * lower(j, k);
      CHECK(std::abs(s - theta(i, j)) < 1e-12);
    }
  }

  Matrix indefinite(2, 2);
  indefinite(0, 0) = 1.0;
  indefinite(0, 1) = 2.0;
  indefinite(1, 0) = 2.0;
  indefinite(1, 1) = 1.0;
  CHECK_THROWS_AS(sampling::cholesky_lower(indefinite), data_error);
}

TEST_CASE("cholesky jitter rescues a borderline PSD matrix") {
  // Rank-one matrix: exactly singular, factorable only after jitter.
  Matrix rank1(3, 3);
  const double a[3] = {1.0, 2.0, 3.0};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) rank1(i, j) = a[i] * a[j];
  }
  const auto lower = sampling::cholesky_lower(rank1);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += lower(i, k) * lower(j, k);
      CHECK(std::abs(s - rank1(i, j)) < 1e-6);
    }
  }
}

TEST_CASE("sample_model normal matches its covariance target") {
  SUBCASE("independent coordinates") {
    const std::size_t n = 5000, p = 3;
    const auto x = sampling::sample_model(
        {ModelSpec::Family::normal, 10.0, CovarianceSpec::ar1(0.0), n, p}, {1, 0});
    const auto cov = stats::empirical_covariance(x);
    const double tol = 5.0 / std::sqrt(double(n));
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        CHECK(std::abs(cov(i, j) - (i == j ? 1.0 : 0.0)) < tol);
      }
    }
  }
  SUBCASE("rho = 0.2 lag-one covariance") {
    const std::size_t n = 5000, p = 3;
    const auto x = sampling::sample_model(
        {ModelSpec::Family::normal, 10.0, CovarianceSpec::ar1(0.2), n, p}, {2, 0});
    const auto cov = stats::empirical_covariance(x);
    CHECK(std::abs(cov(0, 1) - 0.2) < 5.0 / std::sqrt(double(n)));
  }
}

TEST_CASE("student_t rows have covariance theta, not the scale matrix") {
  const std::size_t n = 20000, p = 2;
  const auto x = sampling::sample_model(
      {ModelSpec::Family::student_t, 10.0, CovarianceSpec::ar1(0.0), n, p},
      {3, 0});
  const auto cov = stats::empirical_covariance(x);
  for (std::size_t j = 0; j < p; ++j) {
    CHECK(std::abs(cov(j, j) - 1.0) < 0.05);  // within 5%
  }
}

TEST_CASE("student_t requires an integer df of at least 3") {
  CHECK_THROWS_AS(
      sampling::sample_model(
          {ModelSpec::Family::student_t, 2.0, CovarianceSpec::ar1(0.0), 10, 2},
          {0, 0}),
      config_error);
  CHECK_THROWS_AS(
      sampling::sample_model(
          {ModelSpec::Family::student_t, 4.5, CovarianceSpec::ar1(0.0), 10, 2},
          {0, 0}),
      config_error);
}

TEST_CASE("standardized residuals of normal rows have unit variance") {
  const std::size_t n = 20000, p = 3;
  const auto theta = CovarianceSpec::ar1(0.6);
  const auto x = sampling::sample_model(
      {ModelSpec::Family::normal, 10.0, theta, n, p}, {4, 0});
  const auto lower = sampling::cholesky_lower(theta.materialize(p));
  // forward-substitute L z = x_i
  std::vector<double> sumsq(p, 0.0);
  std::vector<double> z(p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    for (std::size_t a = 0; a < p; ++a) {
      double s = row[a];
      for (std::size_t b = 0; b < a; ++b) s -= lower(a, b) * z[b];
      z[a] = s / lower(a, a);
      sumsq[a] += z[a] * z[a];
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    CHECK(std::abs(sumsq[a] / double(n) - 1.0) < 0.05);
  }
}

TEST_CASE("sample_gaussian marginal checks") {
  SUBCASE("standard normals") {
    const std::size_t m = 20000;
    const auto g = sampling::sample_gaussian(CovarianceSpec::ar1(0.0), m, 1, {5, 0});
    double mean = 0.0;
    for (double v : g.values) mean += v;
    mean /= double(m);
    CHECK(std::abs(mean) < 5.0 / std::sqrt(double(m)));
  }
  SUBCASE("variance 4") {
    Matrix v(1, 1);
    v(0, 0) = 4.0;
    const std::size_t m = 20000;
    const auto g = sampling::sample_gaussian(
        CovarianceSpec::explicit_matrix_of(v), m, 1, {6, 0});
    double s2 = 0.0;
    for (double x : g.values) s2 += x * x;
    CHECK(std::abs(s2 / double(m) - 4.0) < 0.2);  // 5%
  }
  SUBCASE("AR(1) 0.8 pair correlation") {
    const std::size_t m = 20000;
    const auto g = sampling::sample_gaussian(CovarianceSpec::ar1(0.8), m, 2, {7, 0});
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sxy += g(i, 0) * g(i, 1);
      sxx += g(i, 0) * g(i, 0);
      syy += g(i, 1) * g(i, 1);
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy) - 0.8) < 5.0 / std::sqrt(double(m)));
  }
}

TEST_CASE("weight schemes satisfy their moment contracts") {
  const std::size_t n = 100000;
  SUBCASE("rademacher") {
    const auto w = sampling::sample_weights(WeightScheme::rademacher(), n, {8, 0});
    for (double v : w) CHECK((v == 1.0 || v == -1.0));
    const auto m = sample_moments(w);
    CHECK(std::abs(m.mean) < 0.02);
    CHECK(std::abs(m.var - 1.0) < 0.02);
  }
  SUBCASE("mammen two-point law") {
    // Oracle: exact moments of the two-point law.
    const double sqrt5 = std::sqrt(5.0);
    const double lo = -(sqrt5 - 1.0) / 2.0, hi = (sqrt5 + 1.0) / 2.0;
    const double p_lo = (sqrt5 + 1.0) / (2.0 * sqrt5);
    CHECK(std::abs(lo * p_lo + hi * (1 - p_lo)) < 1e-15);
    CHECK(std::abs(lo * lo * p_lo + hi * hi * (1 - p_lo) - 1.0) < 1e-15);
    CHECK(std::abs(lo * lo * lo * p_lo + hi * hi * hi * (1 - p_lo) - 1.0) < 1e-15);

    const auto w = sampling::sample_weights(WeightScheme::mammen(), n, {9, 0});
    for (double v : w) CHECK((std::abs(v - lo) < 1e-15 || std::abs(v - hi) < 1e-15));
    const auto m = sample_moments(w);
    CHECK(std::abs(m.mean) < 0.02);
    CHECK(std::abs(m.var - 1.0) < 0.02);
    CHECK(std::abs(m.third - 1.0) < 0.05);
  }
  SUBCASE("standardized Beta(1/2, 3/2)") {
    // Beta(1/2,3/2): mean 1/4, variance 1/16, so e = 4(B - 1/4);
    // its third moment is exactly 1.
    const auto w =
        sampling::sample_weights(WeightScheme::std_beta(0.5, 1.5), n, {10, 0});
    const auto m = sample_moments(w);
    CHECK(std::abs(m.mean) < 0.02);
    CHECK(std::abs(m.var - 1.0) < 0.02);
    CHECK(std::abs(m.third - 1.0) < 0.05);
    // support check: e = 4B - 1 with B in (0,1), so e in (-1, 3)
    for (double v : w) {
      CHECK(v > -1.0);
      CHECK(v < 3.0);
    }
  }
  SUBCASE("gaussian") {
    const auto w = sampling::sample_weights(WeightScheme::gaussian(), n, {11, 0});
    const auto m = sample_moments(w);
    CHECK(std::abs(m.mean) < 0.02);
    CHECK(std::abs(m.var - 1.0) < 0.02);
  }
}

TEST_CASE("std_beta rejects shapes that are not half-integers") {
  CHECK_THROWS_AS(
      sampling::sample_weights(WeightScheme::std_beta(0.3, 1.5), 10, {0, 0}),
      config_error);
  CHECK_THROWS_AS(
      sampling::sample_weights(WeightScheme::std_beta(-0.5, 1.5), 10, {0, 0}),
      config_error);
}

TEST_CASE("sampling is bitwise deterministic in (spec, seed)") {
  const ModelSpec spec{ModelSpec::Family::student_t, 10.0,
                       CovarianceSpec::ar1(0.2), 50, 20};
  const auto a = sampling::sample_model(spec, {77, 5});
  const auto b = sampling::sample_model(spec, {77, 5});
  CHECK(a.values == b.values);
  const auto w1 = sampling::sample_weights(WeightScheme::mammen(), 100, {77, 5});
  const auto w2 = sampling::sample_weights(WeightScheme::mammen(), 100, {77, 5});
  CHECK(w1 == w2);
}
