#include "kboot/sampling.hpp"

#include <cmath>

#include "kboot/errors.hpp"

namespace kboot::sampling {

CovarianceSpec CovarianceSpec::ar1(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) {
    throw config_error("CovarianceSpec: ar1 rho must lie in (-1,1)");
  }
  CovarianceSpec spec;
  spec.kind = Kind::ar1;
  spec.rho = rho;
  return spec;
}

CovarianceSpec CovarianceSpec::identity() { return ar1(0.0); }

CovarianceSpec CovarianceSpec::explicit_matrix_of(Matrix m) {
  if (m.rows != m.cols) throw config_error("CovarianceSpec: matrix must be square");
  CovarianceSpec spec;
  spec.kind = Kind::explicit_matrix;
  spec.matrix = std::move(m);
  return spec;
}

Matrix CovarianceSpec::materialize(std::size_t p) const {
  if (kind == Kind::explicit_matrix) {
    if (matrix.rows != p) {
      throw config_error("CovarianceSpec: matrix is " + std::to_string(matrix.rows) +
                         "x" + std::to_string(matrix.cols) + ", expected dimension " +
                         std::to_string(p));
    }
    return matrix;
  }
  Matrix theta(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      theta(i, j) = std::pow(rho, double(i > j ? i - j : j - i));
    }
  }
  return theta;
}

std::string WeightScheme::name() const {
  switch (kind) {
    case Kind::gaussian: return "gaussian";
    case Kind::rademacher: return "rademacher";
    case Kind::mammen: return "mammen";
    case Kind::std_beta:
      return "std_beta(" + std::to_string(alpha) + "," + std::to_string(beta) + ")";
  }
  return "?";
}

WeightScheme weight_scheme_from_name(const std::string& name) {
  if (name == "gaussian") return WeightScheme::gaussian();
  if (name == "rademacher") return WeightScheme::rademacher();
  if (name == "mammen") return WeightScheme::mammen();
  if (name == "std_beta") return WeightScheme::std_beta(0.5, 1.5);
  throw config_error("unknown weight scheme: " + name);
}

namespace {

bool try_cholesky(const Matrix& a, Matrix& lower) {
  const std::size_t p = a.rows;
  lower = Matrix(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / ljj;
    }
  }
  return true;
}

}  // namespace

Matrix cholesky_lower(const Matrix& spd) {
  if (spd.rows != spd.cols || spd.rows == 0) {
    throw config_error("cholesky_lower: matrix must be square and nonempty");
  }
  Matrix lower;
  if (try_cholesky(spd, lower)) return lower;

  // Jitter once: borderline PSD inputs (numerically singular user
  // matrices) get 1e-10 * trace/p added to the diagonal.
  double trace = 0.0;
  for (std::size_t j = 0; j < spd.rows; ++j) trace += spd(j, j);
  Matrix jittered = spd;
  const double eps = 1e-10 * trace / double(spd.rows);
  for (std::size_t j = 0; j < spd.rows; ++j) jittered(j, j) += eps;
  if (try_cholesky(jittered, lower)) return lower;
  throw data_error("cholesky_lower: matrix is not positive definite (after jitter)");
}

GaussianSampler::GaussianSampler(Matrix chol_lower) : chol_(std::move(chol_lower)) {}

GaussianSampler::GaussianSampler(const CovarianceSpec& cov, std::size_t p)
    : chol_(cholesky_lower(cov.materialize(p))) {}

void GaussianSampler::draw_row(RandomStream& rng, std::span<double> out) const {
  const std::size_t p = chol_.rows;
  thread_local std::vector<double> z;
  z.resize(p);
  for (std::size_t j = 0; j < p; ++j) z[j] = rng.normal();
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    const double* lrow = chol_.values.data() + i * p;
    for (std::size_t k = 0; k <= i; ++k) s += lrow[k] * z[k];
    out[i] = s;
  }
}

Matrix sample_model(const ModelSpec& spec, SeedSpec seed) {
  if (spec.n == 0 || spec.p == 0) throw config_error("sample_model: empty shape");
  const bool is_t = spec.family == ModelSpec::Family::student_t;
  int df = 0;
  if (is_t) {
    if (!(spec.df > 2.0) || spec.df != std::floor(spec.df)) {
      throw config_error("sample_model: student_t df must be an integer >= 3");
    }
    df = int(spec.df);
  }

  GaussianSampler gaussian(spec.cov, spec.p);
  // Scale so that the covariance of the t rows equals the requested
  // matrix: with scale S = theta*(df-2)/df, cov = S*df/(df-2) = theta.
  const double t_scale = is_t ? std::sqrt((spec.df - 2.0) / spec.df) : 1.0;

  Matrix x(spec.n, spec.p);
  RandomStream rng(seed);
  for (std::size_t i = 0; i < spec.n; ++i) {
    auto row = x.row(i);
    gaussian.draw_row(rng, row);
    if (is_t) {
      double chi2 = 0.0;
      for (int k = 0; k < df; ++k) {
        const double z = rng.normal();
        chi2 += z * z;
      }
      const double factor = t_scale * std::sqrt(double(df) / chi2);
      for (double& v : row) v *= factor;
    }
  }
  return x;
}

Matrix sample_gaussian(const CovarianceSpec& cov, std::size_t count, std::size_t p,
                       SeedSpec seed) {
  if (count == 0 || p == 0) throw config_error("sample_gaussian: empty shape");
  GaussianSampler gaussian(cov, p);
  Matrix x(count, p);
  RandomStream rng(seed);
  for (std::size_t i = 0; i < count; ++i) gaussian.draw_row(rng, x.row(i));
  return x;
}

namespace {

// Two-point law with mean 0, variance 1 and third moment 1: values
// -(sqrt5-1)/2 and (sqrt5+1)/2 with probabilities (sqrt5+1)/(2 sqrt5)
// and (sqrt5-1)/(2 sqrt5).
struct MammenConstants {
  double low, high, p_low;
};

constexpr MammenConstants mammen_constants() {
  const double sqrt5 = 2.23606797749978969640917366873;
  return {-(sqrt5 - 1.0) / 2.0, (sqrt5 + 1.0) / 2.0, (sqrt5 + 1.0) / (2.0 * sqrt5)};
}

double chi_square(RandomStream& rng, int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    const double z = rng.normal();
    s += z * z;
  }
  return s;
}

}  // namespace

void sample_weights_into(const WeightScheme& scheme, RandomStream& rng,
                         std::span<double> out) {
  switch (scheme.kind) {
    case WeightScheme::Kind::gaussian:
      for (double& w : out) w = rng.normal();
      return;
    case WeightScheme::Kind::rademacher:
      for (double& w : out) w = (rng.next_u64() & 1u) ? 1.0 : -1.0;
      return;
    case WeightScheme::Kind::mammen: {
      constexpr MammenConstants c = mammen_constants();
      for (double& w : out) w = (rng.uniform01() < c.p_low) ? c.low : c.high;
      return;
    }
    case WeightScheme::Kind::std_beta: {
      // Beta(a,b) via gamma ratio; gamma(k/2) = chi2_k / 2, which keeps
      // the generator exact for half-integer shapes. Other shapes are
      // rejected at configuration time.
      const double a2 = 2.0 * scheme.alpha;
      const double b2 = 2.0 * scheme.beta;
      if (!(scheme.alpha > 0.0) || !(scheme.beta > 0.0) ||
          a2 != std::floor(a2) || b2 != std::floor(b2)) {
        throw config_error(
            "sample_weights: std_beta shapes must be positive multiples of 1/2");
      }
      const double ab = scheme.alpha + scheme.beta;
      const double mean = scheme.alpha / ab;
      const double sd =
          std::sqrt(scheme.alpha * scheme.beta / (ab * ab * (ab + 1.0)));
      for (double& w : out) {
        const double g1 = chi_square(rng, int(a2));
        const double g2 = chi_square(rng, int(b2));
        w = (g1 / (g1 + g2) - mean) / sd;
      }
      return;
    }
  }
  throw config_error("sample_weights: unknown scheme");
}

std::vector<double> sample_weights(const WeightScheme& scheme, std::size_t n,
                                   SeedSpec seed) {
  std::vector<double> out(n);
  RandomStream rng(seed);
  sample_weights_into(scheme, rng, out);
  return out;
}

}  // namespace kboot::sampling
