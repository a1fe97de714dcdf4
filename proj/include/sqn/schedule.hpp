#pragma once

#include <cmath>
#include <cstdint>

#include "sqn/errors.hpp"

namespace sqn {

enum class ScheduleKind {
    InverseSqrt,   // base / sqrt(k)
    Constant,      // base
    InversePower,  // base * k^(-beta), beta in (0.5, 1)
};

struct StepSchedule {
    ScheduleKind kind = ScheduleKind::InverseSqrt;
    double base = 1.0;
    double beta = 0.75;  // InversePower only
};

/// Step size for iteration k >= 1. Positive and non-increasing in k for the
/// diminishing kinds.
inline double schedule_alpha(const StepSchedule& sched, std::uint64_t k) {
    if (k == 0) throw InvalidInputError("schedule_alpha: iterations count from 1");
    if (!(sched.base > 0.0) || !std::isfinite(sched.base)) {
        throw InvalidInputError("schedule_alpha: base step size must be positive and finite");
    }
    switch (sched.kind) {
        case ScheduleKind::InverseSqrt:
            return sched.base / std::sqrt(static_cast<double>(k));
        case ScheduleKind::Constant:
            return sched.base;
        case ScheduleKind::InversePower:
            if (!(sched.beta > 0.5) || !(sched.beta < 1.0)) {
                throw InvalidInputError("schedule_alpha: beta must lie in (0.5, 1)");
            }
            return sched.base * std::pow(static_cast<double>(k), -sched.beta);
    }
    throw InvalidInputError("schedule_alpha: unknown schedule kind");
}

}  // namespace sqn
