#include "sqn/direction.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sqn/errors.hpp"

namespace sqn {

Vec two_loop(const CurvatureMemory& memory, const Vec& g, double h0_scale) {
    if (!memory.empty() && g.size() != memory.dim()) {
        throw InvalidInputError("two_loop: gradient dimension " + std::to_string(g.size()) +
                                " does not match memory dimension " +
                                std::to_string(memory.dim()));
    }
    if (!(h0_scale > 0.0) || !std::isfinite(h0_scale)) {
        throw InvalidInputError("two_loop: h0_scale must be positive and finite");
    }

    Vec u = g;
    const std::size_t c = memory.size();
    std::vector<double> mu(c);
    for (std::size_t i = c; i-- > 0;) {  // newest -> oldest
        const CurvaturePair& p = memory.pair(i);
        mu[i] = p.rho * kern::dot(p.s, u);
        kern::axpy(-mu[i], p.y_bar, u);
    }
    kern::scal(h0_scale, u);
    for (std::size_t i = 0; i < c; ++i) {  // oldest -> newest
        const CurvaturePair& p = memory.pair(i);
        const double nu = p.rho * kern::dot(p.y_bar, u);
        kern::axpy(mu[i] - nu, p.s, u);
    }
    return u;
}

std::optional<Vec> normalize_direction(const Vec& v, double floor) {
    if (!(floor > 0.0)) throw InvalidInputError("normalize_direction: floor must be positive");
    if (!all_finite(v)) {
        throw NumericalFailureError("normalize_direction: non-finite direction");
    }
    const double norm = kern::nrm2(v);
    if (norm < floor) return std::nullopt;
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
    return out;
}

Matrix dense_hessian_reconstruct(const CurvatureMemory& memory, double h0_scale,
                                 std::size_t dim) {
    const std::size_t d = memory.empty() ? dim : memory.dim();
    if (d == 0) {
        throw InvalidInputError("dense_hessian_reconstruct: dim required for empty memory");
    }
    if (!memory.empty() && dim != 0 && dim != memory.dim()) {
        throw InvalidInputError("dense_hessian_reconstruct: dim does not match memory");
    }

    Matrix h(d, d, 0.0);
    for (std::size_t i = 0; i < d; ++i) h(i, i) = h0_scale;

    Matrix a(d, d), tmp(d, d), next(d, d);
    for (std::size_t p = 0; p < memory.size(); ++p) {  // oldest -> newest
        const CurvaturePair& cp = memory.pair(p);

        // a = I - rho s y_bar^T
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                a(i, j) = (i == j ? 1.0 : 0.0) - cp.rho * cp.s[i] * cp.y_bar[j];
            }
        }
        // tmp = a * h
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < d; ++t) s += a(i, t) * h(t, j);
                tmp(i, j) = s;
            }
        }
        // next = tmp * a^T + rho s s^T
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < d; ++t) s += tmp(i, t) * a(j, t);
                next(i, j) = s + cp.rho * cp.s[i] * cp.s[j];
            }
        }
        std::swap(h.data, next.data);
    }
    return h;
}

DirectionEngine::DirectionEngine(std::size_t memory_capacity, DampingConfig cfg,
                                 double norm_floor)
    : memory_(memory_capacity), cfg_(cfg), norm_floor_(norm_floor) {
    cfg_.validate();
    if (!(norm_floor > 0.0) || !std::isfinite(norm_floor)) {
        throw InvalidInputError("DirectionEngine: norm_floor must be positive and finite");
    }
}

std::optional<Vec> DirectionEngine::compute_direction(const Vec& x, const Vec& g,
                                                      const Vec* x_prev, const Vec* g_prev,
                                                      const Vec* y_override) {
    if ((x_prev == nullptr) != (g_prev == nullptr)) {
        throw InvalidInputError("compute_direction: x_prev and g_prev must come together");
    }
    if (x.size() != g.size()) {
        throw InvalidInputError("compute_direction: x and g dimensions differ");
    }

    if (x_prev != nullptr) {
        Vec s(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] - (*x_prev)[i];
        if (!all_zero(s)) {  // a zero displacement forms no pair
            Vec y;
            if (y_override != nullptr) {
                y = *y_override;
            } else {
                y.resize(g.size());
                for (std::size_t i = 0; i < g.size(); ++i) y[i] = g[i] - (*g_prev)[i];
            }
            double hinv_scale = 1.0;
            if (cfg_.mode == InitMode::GammaInit) {
                gamma_ = compute_gamma(s, y, cfg_);  // gamma first, then damping
                hinv_scale = gamma_;
            }
            if (auto pair = damp_pair(s, y, hinv_scale, cfg_)) {
                memory_.push(std::move(*pair));
            }
        }
    }

    const double h0_scale = cfg_.mode == InitMode::GammaInit ? 1.0 / gamma_ : 1.0;
    Vec v = two_loop(memory_, g, h0_scale);
    if (cfg_.mode == InitMode::IdentityInit) {
        return normalize_direction(v, norm_floor_);
    }
    return v;
}

}  // namespace sqn
