#include "fedstlf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedstlf/error.hpp"

namespace fedstlf {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
  if (values_.size() != rows * cols) {
    throw ShapeError("matrix value count " + std::to_string(values_.size()) +
                     " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void Matrix::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  if (x.size() != a.cols() || out.size() != a.rows()) throw ShapeError("matvec: shape mismatch");
  const std::size_t cols = a.cols();
  const double* w = a.values().data();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double* row = w + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
}

void matvec_transposed_add(const Matrix& a, std::span<const double> y, std::span<double> out) {
  if (y.size() != a.rows() || out.size() != a.cols()) {
    throw ShapeError("matvec_transposed_add: shape mismatch");
  }
  const std::size_t cols = a.cols();
  const double* w = a.values().data();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    const double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += row[c] * yr;
  }
}

void outer_add(Matrix& a, std::span<const double> y, std::span<const double> x) {
  if (y.size() != a.rows() || x.size() != a.cols()) throw ShapeError("outer_add: shape mismatch");
  const std::size_t cols = a.cols();
  double* w = a.values().data();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += yr * x[c];
  }
}

}  // namespace fedstlf
