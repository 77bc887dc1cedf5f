#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kboot/matrix.hpp"

namespace kboot::stats {

// kth largest entry of v, 1-based: k=1 is the maximum. Ties are
// resolved by multiplicity of the descending sort.
double kth_largest(std::span<const double> v, std::size_t k);

// Quantile of the empirical distribution of `draws` under the
// inf-definition: the smallest draw t with F_hat(t) >= gamma, i.e. the
// ceil(gamma * B)-th smallest draw. No interpolation. The index is
// chosen so that the returned value satisfies the inf property under
// the same floating-point evaluation of F_hat used by a direct scan.
double empirical_quantile(std::span<const double> draws, double gamma);

// Subtracts the column mean from every entry; output columns sum to
// zero up to rounding.
Matrix center_columns(const Matrix& x);

// n^{-1} sum_i (X_i - Xbar)(X_i - Xbar)^T. Divisor is n, not n-1;
// callers expecting the unbiased estimator must rescale.
Matrix empirical_covariance(const Matrix& x);

// (v, -v): the 2p-vector whose order statistics at ranks <= p coincide
// with the order statistics of |v|. Used for two-sided statistics.
std::vector<double> absolute_embedding(std::span<const double> v);

}  // namespace kboot::stats
