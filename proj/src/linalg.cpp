#include "ampcs/linalg.hpp"

#include <cmath>
#include <cstddef>

namespace ampcs {

void matvec(int rows, int cols, const double* a, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    const double* row = a + static_cast<std::size_t>(r) * cols;
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void matvec_serial(int rows, int cols, const double* a, const double* x,
                   double* y) {
  for (int r = 0; r < rows; ++r) {
    const double* row = a + static_cast<std::size_t>(r) * cols;
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void matvec_t(int rows, int cols, const double* a, const double* z,
              double* u) {
#pragma omp parallel for schedule(static)
  for (int c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (int r = 0; r < rows; ++r)
      acc += a[static_cast<std::size_t>(r) * cols + c] * z[r];
    u[c] = acc;
  }
}

void matvec_t_serial(int rows, int cols, const double* a, const double* z,
                     double* u) {
  for (int c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (int r = 0; r < rows; ++r)
      acc += a[static_cast<std::size_t>(r) * cols + c] * z[r];
    u[c] = acc;
  }
}

std::vector<double> transpose(int rows, int cols, const double* a) {
  std::vector<double> at(static_cast<std::size_t>(rows) * cols);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r)
      at[static_cast<std::size_t>(c) * rows + r] =
          a[static_cast<std::size_t>(r) * cols + c];
  return at;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm1(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace ampcs
