#include "sqn/damping.hpp"

#include <cmath>
#include <string>

#include "sqn/errors.hpp"

namespace sqn {

void DampingConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw InvalidInputError("DampingConfig: delta must be positive and finite");
    }
    const bool thresholds_ok = damping_threshold > 0.0 && damping_threshold < 1.0 &&
                               damping_numerator > 0.0 && damping_numerator < 1.0 &&
                               damping_numerator > damping_threshold;
    if (!thresholds_ok) {
        throw InvalidInputError(
            "DampingConfig: need 0 < damping_threshold < damping_numerator < 1");
    }
}

double compute_theta(double s_dot_y, double s_dot_hinv_s, const DampingConfig& cfg) {
    if (!std::isfinite(s_dot_y) || !std::isfinite(s_dot_hinv_s)) {
        throw InvalidInputError("compute_theta: non-finite inputs");
    }
    if (!(s_dot_hinv_s > 0.0)) {
        throw InvalidInputError("compute_theta: s . Hinv . s must be positive, got " +
                                std::to_string(s_dot_hinv_s));
    }
    if (s_dot_y < cfg.damping_threshold * s_dot_hinv_s) {
        return cfg.damping_numerator * s_dot_hinv_s / (s_dot_hinv_s - s_dot_y);
    }
    return 1.0;
}

double compute_gamma(std::span<const double> s, std::span<const double> y,
                     const DampingConfig& cfg) {
    if (all_zero(s)) throw DegenerateStepError("compute_gamma: zero displacement");
    const double sy = kern::dot(s, y);
    if (sy == 0.0) return cfg.delta;
    const double ratio = kern::dot(y, y) / sy;
    // Negative and NaN ratios both fail this comparison and clamp to delta.
    return ratio > cfg.delta ? ratio : cfg.delta;
}

std::optional<CurvaturePair> damp_pair(std::span<const double> s, std::span<const double> y,
                                       double hinv_scale, const DampingConfig& cfg) {
    if (!all_finite(s) || all_zero(s)) {
        throw DegenerateStepError("damp_pair: displacement s is zero or non-finite");
    }
    if (!(hinv_scale > 0.0) || !std::isfinite(hinv_scale)) {
        throw InvalidInputError("damp_pair: hinv_scale must be positive and finite");
    }

    const double s_dot_y = kern::dot(s, y);
    const double s_dot_hinv_s = hinv_scale * kern::dot(s, s);
    const double theta = compute_theta(s_dot_y, s_dot_hinv_s, cfg);

    Vec y_bar(s.size());
    const double blend = (1.0 - theta) * hinv_scale;
    for (std::size_t i = 0; i < s.size(); ++i) y_bar[i] = theta * y[i] + blend * s[i];

    const double curv = kern::dot(s, y_bar);
    if (!(curv > 0.0) || !std::isfinite(curv) ||
        curv < curvature_skip_floor * kern::nrm2(s) * kern::nrm2(y_bar)) {
        return std::nullopt;
    }
    return CurvaturePair(Vec(s.begin(), s.end()), std::move(y_bar));
}

}  // namespace sqn
