#pragma once

#include <optional>

#include "sqn/damping.hpp"
#include "sqn/matrix.hpp"

namespace sqn {

/// v = H_k g via the two-loop recursion over the stored pairs, starting from
/// H_{k,0} = h0_scale * I. The first loop walks pairs newest to oldest, the
/// second oldest to newest; the output is not normalized.
Vec two_loop(const CurvatureMemory& memory, const Vec& g, double h0_scale);

/// v / |v|_2, or nullopt (converged signal) when |v|_2 < floor.
std::optional<Vec> normalize_direction(const Vec& v, double floor);

/// Dense reference for the two-loop recursion: folds
///   H <- (I - rho s y_bar^T) H (I - rho y_bar s^T) + rho s s^T
/// over the stored pairs oldest to newest from H = h0_scale * I, with plain
/// local loops so it shares no code path with two_loop. O(c d^3); intended
/// for small dimensions. dim is required when the memory is empty.
Matrix dense_hessian_reconstruct(const CurvatureMemory& memory, double h0_scale,
                                 std::size_t dim = 0);

/// Search-direction engine: owns the curvature memory, the damping
/// configuration, and the current gamma scaling. One instance per run; not
/// for concurrent sharing.
class DirectionEngine {
  public:
    DirectionEngine(std::size_t memory_capacity, DampingConfig cfg, double norm_floor = 1e-10);

    /// Computes the step direction at iterate x with stochastic gradient g.
    ///
    /// When x_prev/g_prev are supplied, the displacement pair
    /// s = x - x_prev, y = g - g_prev is damped and pushed first (skipped if
    /// s is exactly zero or the damped curvature falls below the positivity
    /// floor). y_override, when given, replaces g - g_prev. Pass null prev
    /// pointers on the first iteration.
    ///
    /// IdentityInit mode returns the normalized direction or nullopt when
    /// its norm falls below the floor; GammaInit mode returns H_k g_k as-is.
    std::optional<Vec> compute_direction(const Vec& x, const Vec& g, const Vec* x_prev = nullptr,
                                         const Vec* g_prev = nullptr,
                                         const Vec* y_override = nullptr);

    const CurvatureMemory& memory() const noexcept { return memory_; }
    const DampingConfig& config() const noexcept { return cfg_; }
    /// Latest gamma (1 until a pair has been formed in GammaInit mode).
    double gamma() const noexcept { return gamma_; }
    double norm_floor() const noexcept { return norm_floor_; }

  private:
    CurvatureMemory memory_;
    DampingConfig cfg_;
    double norm_floor_;
    double gamma_ = 1.0;
};

}  // namespace sqn
