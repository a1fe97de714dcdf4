#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sqn {

using Vec = std::vector<double>;

/// Dense vector/matrix kernels. The top-level functions run OpenMP-parallel
/// above a grain size; `serial` holds the plain-loop reference used by the
/// tests and the benchmark. Reductions are computed over fixed-size blocks
/// combined in block order, so results are identical for any thread count.
namespace kern {

inline constexpr std::size_t reduce_block = 4096;
inline constexpr std::size_t parallel_cutoff = 1u << 15;
inline constexpr std::size_t matmul_cutoff = 1u << 15;  // on m*k*n

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
double nrm2(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scal(double alpha, std::span<double> x);
// Row-major matrix products; shapes in parentheses.
// c (m x n) = a (m x k) * b (n x k)^T
void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n);
// c (m x n) = a (m x k) * b (k x n)
void matmul_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n);
// c (m x n) = a (k x m)^T * b (k x n)
void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n);

}  // namespace serial

double dot(std::span<const double> a, std::span<const double> b);
/// Overflow-safe Euclidean norm (scales by the largest magnitude).
double nrm2(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scal(double alpha, std::span<double> x);
void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n);
void matmul_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n);
void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n);

}  // namespace kern

bool all_finite(std::span<const double> x);
bool all_zero(std::span<const double> x);

}  // namespace sqn
