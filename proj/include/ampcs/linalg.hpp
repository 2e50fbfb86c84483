#pragma once

#include <span>
#include <vector>

namespace ampcs {

// Dense row-major kernels. The OpenMP variants parallelize over the output
// index only: each output element is produced by exactly one thread with a
// serial inner loop, so results are bit-identical for any thread count.

// y = A x, A is rows x cols row-major
void matvec(int rows, int cols, const double* a, const double* x, double* y);
void matvec_serial(int rows, int cols, const double* a, const double* x,
                   double* y);

// u = A^T z
void matvec_t(int rows, int cols, const double* a, const double* z, double* u);
void matvec_t_serial(int rows, int cols, const double* a, const double* z,
                     double* u);

std::vector<double> transpose(int rows, int cols, const double* a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double max_abs(std::span<const double> v);

}  // namespace ampcs
