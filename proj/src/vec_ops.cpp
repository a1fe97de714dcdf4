#include "sqn/vec_ops.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace sqn {

namespace kern {

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double nrm2(std::span<const double> x) {
    double amax = 0.0;
    for (double v : x) {
        if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
        amax = std::max(amax, std::fabs(v));
    }
    if (amax == 0.0) return 0.0;
    if (std::isinf(amax)) return amax;
    double s = 0.0;
    for (double v : x) {
        const double t = v / amax;
        s += t * t;
    }
    return amax * std::sqrt(s);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scal(double alpha, std::span<double> x) {
    for (double& v : x) v *= alpha;
}

void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n) {
    assert(a.size() >= m * k && b.size() >= n * k && c.size() >= m * n);
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a.data() + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b.data() + j * k;
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += ai[t] * bj[t];
            c[i * n + j] = s;
        }
    }
}

void matmul_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n) {
    assert(a.size() >= m * k && b.size() >= k * n && c.size() >= m * n);
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c.data() + i * n;
        std::fill(ci, ci + n, 0.0);
        for (std::size_t t = 0; t < k; ++t) {
            const double ait = a[i * k + t];
            const double* bt = b.data() + t * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += ait * bt[j];
        }
    }
}

void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n) {
    assert(a.size() >= k * m && b.size() >= k * n && c.size() >= m * n);
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c.data() + i * n;
        std::fill(ci, ci + n, 0.0);
        for (std::size_t t = 0; t < k; ++t) {
            const double ati = a[t * m + i];
            const double* bt = b.data() + t * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += ati * bt[j];
        }
    }
}

}  // namespace serial

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    const std::size_t n = a.size();
    if (n < parallel_cutoff) return serial::dot(a, b);
    const std::size_t nblocks = (n + reduce_block - 1) / reduce_block;
    std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
        const std::size_t lo = blk * reduce_block;
        const std::size_t hi = std::min(n, lo + reduce_block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        partial[blk] = s;
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

double nrm2(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < parallel_cutoff) return serial::nrm2(x);

    bool has_nan = false;
    double amax = 0.0;
#pragma omp parallel for schedule(static) reduction(max : amax) reduction(|| : has_nan)
    for (std::size_t i = 0; i < n; ++i) {
        has_nan = has_nan || std::isnan(x[i]);
        amax = std::max(amax, std::fabs(x[i]));
    }
    if (has_nan) return std::numeric_limits<double>::quiet_NaN();
    if (amax == 0.0) return 0.0;
    if (std::isinf(amax)) return amax;

    const std::size_t nblocks = (n + reduce_block - 1) / reduce_block;
    std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
        const std::size_t lo = blk * reduce_block;
        const std::size_t hi = std::min(n, lo + reduce_block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double t = x[i] / amax;
            s += t * t;
        }
        partial[blk] = s;
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return amax * std::sqrt(s);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    const std::size_t n = x.size();
    if (n < parallel_cutoff) {
        serial::axpy(alpha, x, y);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal(double alpha, std::span<double> x) {
    const std::size_t n = x.size();
    if (n < parallel_cutoff) {
        serial::scal(alpha, x);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

// The parallel matmuls split over output rows; each element keeps the serial
// accumulation order, so they match the serial kernels bit for bit.
void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (m * k * n < matmul_cutoff) {
        serial::matmul_nt(a, b, c, m, k, n);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a.data() + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b.data() + j * k;
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += ai[t] * bj[t];
            c[i * n + j] = s;
        }
    }
}

void matmul_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (m * k * n < matmul_cutoff) {
        serial::matmul_nn(a, b, c, m, k, n);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c.data() + i * n;
        std::fill(ci, ci + n, 0.0);
        for (std::size_t t = 0; t < k; ++t) {
            const double ait = a[i * k + t];
            const double* bt = b.data() + t * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += ait * bt[j];
        }
    }
}

void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n) {
    if (m * k * n < matmul_cutoff) {
        serial::matmul_tn(a, b, c, m, k, n);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c.data() + i * n;
        std::fill(ci, ci + n, 0.0);
        for (std::size_t t = 0; t < k; ++t) {
            const double ati = a[t * m + i];
            const double* bt = b.data() + t * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += ati * bt[j];
        }
    }
}

}  // namespace kern

bool all_finite(std::span<const double> x) {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

bool all_zero(std::span<const double> x) {
    for (double v : x) {
        if (v != 0.0) return false;
    }
    return true;
}

}  // namespace sqn
