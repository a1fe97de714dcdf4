#pragma once

#include <optional>
#include <span>

#include "sqn/curvature.hpp"

namespace sqn {

/// How H_{k,0} is chosen each step.
enum class InitMode {
    IdentityInit,  // H_{k,0} = I; directions get l2-normalized (SdLBFGS)
    GammaInit,     // H_{k,0} = gamma_k^{-1} I; directions left as-is (SdLBFGS0)
};

/// Damping parameters. threshold/numerator are the 0.25 / 0.75 constants of
/// the damping rule; delta is the lower clamp for gamma, used only in
/// GammaInit mode.
struct DampingConfig {
    InitMode mode = InitMode::IdentityInit;
    double delta = 0.01;
    double damping_threshold = 0.25;
    double damping_numerator = 0.75;

    void validate() const;
};

/// Pairs whose damped curvature s . y_bar lands below this relative floor are
/// dropped instead of stored, keeping rho finite.
inline constexpr double curvature_skip_floor = 1e-12;

/// Damping weight theta in (0, 1]: damped when s.y < threshold * s.Hinv.s,
/// 1 otherwise (strict inequality; the boundary is not damped).
double compute_theta(double s_dot_y, double s_dot_hinv_s, const DampingConfig& cfg);

/// Scaling gamma = max{ y.y / s.y, delta } for H_{k,0} = gamma^{-1} I.
/// A vanishing or negative ratio clamps to delta.
double compute_gamma(std::span<const double> s, std::span<const double> y, const DampingConfig& cfg);

/// Builds the damped pair (s, y_bar, rho) with
/// y_bar = theta * y + (1 - theta) * hinv_scale * s, where hinv_scale encodes
/// H_{k,0}^{-1} = hinv_scale * I. Guarantees
/// s . y_bar >= threshold * hinv_scale * s.s, with equality exactly when the
/// pair was damped. Returns nullopt (skip signal) when the damped curvature
/// falls below the positivity floor.
std::optional<CurvaturePair> damp_pair(std::span<const double> s, std::span<const double> y,
                                       double hinv_scale, const DampingConfig& cfg);

}  // namespace sqn
