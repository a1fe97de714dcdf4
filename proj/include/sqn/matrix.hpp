#pragma once

#include <cassert>
#include <cstddef>

#include "sqn/vec_ops.hpp"

namespace sqn {

/// Dense row-major matrix. Only used where forming the full operator is the
/// point (the dense reconstruction oracle, tests); everything hot stays in
/// the implicit two-loop form.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < rows && j < cols);
        return data[i * cols + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < rows && j < cols);
        return data[i * cols + j];
    }

    Vec matvec(const Vec& x) const {
        assert(x.size() == cols);
        Vec y(rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += data[i * cols + j] * x[j];
            y[i] = s;
        }
        return y;
    }
};

}  // namespace sqn
