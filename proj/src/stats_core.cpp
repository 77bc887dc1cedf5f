#include "kboot/stats_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "kboot/errors.hpp"

namespace kboot::stats {

double kth_largest(std::span<const double> v, std::size_t k) {
  if (k < 1 || k > v.size()) {
    throw config_error("kth_largest: rank " + std::to_string(k) +
                       " out of range for length " + std::to_string(v.size()));
  }
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted[k - 1];
}

double empirical_quantile(std::span<const double> draws, double gamma) {
  if (draws.empty()) throw config_error("empirical_quantile: no draws");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw config_error("empirical_quantile: gamma must lie in (0,1)");
  }
  const std::size_t b = draws.size();
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());

  // ceil(gamma*B), then nudge so that m is the smallest count with
  // m/B >= gamma under double arithmetic (the product can round across
  // an integer boundary in either direction).
  std::size_t m = std::size_t(std::ceil(gamma * double(b)));
  if (m < 1) m = 1;
  if (m > b) m = b;
  while (m > 1 && double(m - 1) / double(b) >= gamma) --m;
  while (m < b && double(m) / double(b) < gamma) ++m;
  return sorted[m - 1];
}

Matrix center_columns(const Matrix& x) {
  require_nonempty(x, "center_columns");
  std::vector<double> mean(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto row = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= double(x.rows);

  Matrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto src = x.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < x.cols; ++j) dst[j] = src[j] - mean[j];
  }
  return out;
}

Matrix empirical_covariance(const Matrix& x) {
  require_nonempty(x, "empirical_covariance");
  if (x.rows < 2) {
    throw config_error("empirical_covariance: need at least 2 observations");
  }
  const Matrix centered = center_columns(x);
  const std::size_t p = x.cols;
  Matrix cov(p, p);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto row = centered.row(i);
    for (std::size_t j = 0; j < p; ++j) {
      const double rj = row[j];
      for (std::size_t k = j; k < p; ++k) cov(j, k) += rj * row[k];
    }
  }
  const double inv_n = 1.0 / double(x.rows);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      cov(j, k) *= inv_n;
      cov(k, j) = cov(j, k);
    }
  }
  return cov;
}

std::vector<double> absolute_embedding(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(2 * v.size());
  out.insert(out.end(), v.begin(), v.end());
  for (double x : v) out.push_back(-x);
  return out;
}

}  // namespace kboot::stats
