#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "kboot/errors.hpp"

namespace kboot {

// Dense row-major matrix of doubles. Observation matrices store one
// sample per row: n rows, p columns.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }

  bool all_finite() const {
    for (double v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

inline void require_nonempty(const Matrix& m, const char* what) {
  if (m.rows == 0 || m.cols == 0) {
    throw config_error(std::string(what) + ": empty matrix");
  }
}

}  // namespace kboot
