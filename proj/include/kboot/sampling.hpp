#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kboot/matrix.hpp"
#include "kboot/rng.hpp"

namespace kboot::sampling {

// Target covariance of generated vectors. ar1 materializes
// theta_{ij} = rho^{|i-j|}; explicit_matrix carries a user SPD matrix.
struct CovarianceSpec {
  enum class Kind { ar1, explicit_matrix };

  Kind kind = Kind::ar1;
  double rho = 0.0;
  Matrix matrix;  // explicit_matrix only

  static CovarianceSpec ar1(double rho);
  static CovarianceSpec identity();
  static CovarianceSpec explicit_matrix_of(Matrix m);

  Matrix materialize(std::size_t p) const;
};

struct ModelSpec {
  enum class Family { normal, student_t };

  Family family = Family::normal;
  double df = 10.0;  // student_t only; integer >= 3 (finite covariance)
  CovarianceSpec cov;
  std::size_t n = 0;
  std::size_t p = 0;
};

// Multiplier weight families. All have mean 0 and variance 1; mammen
// and std_beta(1/2, 3/2) additionally have third moment exactly 1.
struct WeightScheme {
  enum class Kind { gaussian, rademacher, mammen, std_beta };

  Kind kind = Kind::gaussian;
  double alpha = 0.5;  // std_beta shapes; both must be positive
  double beta = 1.5;   // multiples of 1/2 (sampled via chi-square sums)

  static WeightScheme gaussian() { return {Kind::gaussian, 0, 0}; }
  static WeightScheme rademacher() { return {Kind::rademacher, 0, 0}; }
  static WeightScheme mammen() { return {Kind::mammen, 0, 0}; }
  static WeightScheme std_beta(double a, double b) { return {Kind::std_beta, a, b}; }

  std::string name() const;
};

WeightScheme weight_scheme_from_name(const std::string& name);

// Lower Cholesky factor of an SPD matrix. On a first failure the
// diagonal is jittered by 1e-10 * trace/p and factorization retried
// once; a second failure throws data_error.
Matrix cholesky_lower(const Matrix& spd);

// Draws N(0, L L^T) rows from a prefactored covariance.
class GaussianSampler {
 public:
  explicit GaussianSampler(Matrix chol_lower);
  explicit GaussianSampler(const CovarianceSpec& cov, std::size_t p);

  std::size_t dim() const { return chol_.rows; }
  void draw_row(RandomStream& rng, std::span<double> out) const;

 private:
  Matrix chol_;
};

// n i.i.d. rows from the model. For student_t the scale matrix is
// theta * (df-2)/df so that the covariance of the generated rows is
// exactly the requested theta (many libraries treat theta as the scale
// instead; this one does not).
Matrix sample_model(const ModelSpec& spec, SeedSpec seed);

// count i.i.d. N(0, theta) rows.
Matrix sample_gaussian(const CovarianceSpec& cov, std::size_t count, std::size_t p,
                       SeedSpec seed);

// n i.i.d. multiplier weights.
std::vector<double> sample_weights(const WeightScheme& scheme, std::size_t n,
                                   SeedSpec seed);

// In-place variants used by the hot loops: same variates, no allocation.
void sample_weights_into(const WeightScheme& scheme, RandomStream& rng,
                         std::span<double> out);

}  // namespace kboot::sampling
