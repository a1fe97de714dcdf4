#include "sqn/optimizer.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace sqn {

namespace {

OptimizerState base_state(Vec x0) {
    if (x0.empty()) throw InvalidInputError("optimizer: empty initial iterate");
    if (!all_finite(x0)) throw InvalidInputError("optimizer: non-finite initial iterate");
    OptimizerState st;
    st.x = std::move(x0);
    return st;
}

}  // namespace

OptimizerState make_sdlbfgs_state(Vec x0, std::size_t memory_size, double delta,
                                  double norm_floor, bool variance_reduced) {
    OptimizerState st = base_state(std::move(x0));
    DampingConfig cfg;
    cfg.mode = InitMode::IdentityInit;
    cfg.delta = delta;
    st.engine.emplace(memory_size, cfg, norm_floor);
    st.variance_reduced = variance_reduced;
    return st;
}

OptimizerState make_sdlbfgs0_state(Vec x0, std::size_t memory_size, double delta,
                                   bool variance_reduced) {
    OptimizerState st = base_state(std::move(x0));
    DampingConfig cfg;
    cfg.mode = InitMode::GammaInit;
    cfg.delta = delta;
    st.engine.emplace(memory_size, cfg);
    st.variance_reduced = variance_reduced;
    return st;
}

OptimizerState make_sgd_state(Vec x0) { return base_state(std::move(x0)); }

OptimizerState make_adagrad_state(Vec x0) {
    OptimizerState st = base_state(std::move(x0));
    st.accumulator.assign(st.x.size(), 0.0);
    return st;
}

OptimizerState make_lbfgs_plain_state(Vec x0, std::size_t memory_size) {
    OptimizerState st = base_state(std::move(x0));
    st.plain_memory.emplace(memory_size);
    return st;
}

namespace {

TrajectoryRecord make_record(const OptimizerState& st, const Eval& e, double alpha) {
    TrajectoryRecord r;
    r.iter = st.k;
    r.objective = e.value;
    r.grad_norm = kern::nrm2(e.grad);
    r.alpha = alpha;
    return r;
}

bool eval_is_finite(const Eval& e) { return std::isfinite(e.value) && all_finite(e.grad); }

// Shifts the history window forward after an update: x_prev/g_prev describe
// iteration k, st.x becomes x_{k+1}.
void advance(OptimizerState& st, Vec x_next, Vec g_now, std::uint64_t batch_seed) {
    st.x_prev = std::move(st.x);
    st.g_prev = std::move(g_now);
    st.prev_batch_seed = batch_seed;
    st.x = std::move(x_next);
    st.k += 1;
}

// Variance-reduced gradient displacement: g(x_k; seed_{k-1}) - g_prev, both
// on the previous minibatch.
std::optional<Vec> vr_displacement(const OptimizerState& st, const GradientOracle& oracle) {
    if (!st.variance_reduced || !st.prev_batch_seed || !st.g_prev) return std::nullopt;
    Eval at_prev_batch = oracle.eval(st.x, *st.prev_batch_seed);
    Vec y(st.x.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = at_prev_batch.grad[i] - (*st.g_prev)[i];
    return y;
}

TrajectoryRecord quasi_newton_step(OptimizerState& st, const GradientOracle& oracle,
                                   const StepSchedule& sched, std::uint64_t batch_seed,
                                   bool strict) {
    if (!st.engine) throw InvalidInputError("quasi-Newton step on a state without an engine");
    const double alpha = schedule_alpha(sched, st.k);
    Eval e = oracle.eval(st.x, batch_seed);

    TrajectoryRecord rec = make_record(st, e, alpha);
    if (!eval_is_finite(e)) {
        rec.flag = RunFlag::Nonfinite;
        if (strict) {
            throw StepFailure("sdlbfgs: non-finite objective or gradient at iteration " +
                                  std::to_string(st.k),
                              rec);
        }
        return rec;
    }

    std::optional<Vec> direction;
    try {
        const std::optional<Vec> y_vr = vr_displacement(st, oracle);
        direction = st.engine->compute_direction(
            st.x, e.grad, st.x_prev ? &*st.x_prev : nullptr, st.g_prev ? &*st.g_prev : nullptr,
            y_vr ? &*y_vr : nullptr);
    } catch (const NumericalFailureError&) {
        if (strict) throw;
        rec.flag = RunFlag::Nonfinite;
        return rec;
    } catch (const InvalidInputError&) {
        // Overflowed curvature products in a diverging GammaInit run.
        if (strict) throw;
        rec.flag = RunFlag::Nonfinite;
        return rec;
    }

    Vec x_next = st.x;
    if (direction) {
        kern::axpy(-alpha, *direction, x_next);
    } else {
        rec.flag = RunFlag::Converged;  // direction norm under the floor; hold position
    }
    advance(st, std::move(x_next), std::move(e.grad), batch_seed);
    return rec;
}

}  // namespace

TrajectoryRecord sdlbfgs_step(OptimizerState& st, const GradientOracle& oracle,
                              const StepSchedule& sched, std::uint64_t batch_seed) {
    if (st.engine && st.engine->config().mode != InitMode::IdentityInit) {
        throw InvalidInputError("sdlbfgs_step: state is not in IdentityInit mode");
    }
    return quasi_newton_step(st, oracle, sched, batch_seed, /*strict=*/true);
}

TrajectoryRecord sdlbfgs0_step(OptimizerState& st, const GradientOracle& oracle,
                               const StepSchedule& sched, std::uint64_t batch_seed) {
    if (st.engine && st.engine->config().mode != InitMode::GammaInit) {
        throw InvalidInputError("sdlbfgs0_step: state is not in GammaInit mode");
    }
    return quasi_newton_step(st, oracle, sched, batch_seed, /*strict=*/false);
}

TrajectoryRecord sgd_step(OptimizerState& st, const GradientOracle& oracle, double lr,
                          std::uint64_t batch_seed) {
    if (!(lr > 0.0) && lr != 0.0) throw InvalidInputError("sgd_step: negative learning rate");
    Eval e = oracle.eval(st.x, batch_seed);
    TrajectoryRecord rec = make_record(st, e, lr);
    if (!eval_is_finite(e)) {
        rec.flag = RunFlag::Nonfinite;
        return rec;
    }
    Vec x_next = st.x;
    kern::axpy(-lr, e.grad, x_next);
    advance(st, std::move(x_next), std::move(e.grad), batch_seed);
    return rec;
}

TrajectoryRecord adagrad_step(OptimizerState& st, const GradientOracle& oracle, double lr,
                              double eps, std::uint64_t batch_seed) {
    if (st.accumulator.size() != st.x.size()) {
        throw InvalidInputError("adagrad_step: state has no accumulator");
    }
    if (!(eps >= 0.0)) throw InvalidInputError("adagrad_step: eps must be non-negative");
    Eval e = oracle.eval(st.x, batch_seed);
    TrajectoryRecord rec = make_record(st, e, lr);
    if (!eval_is_finite(e)) {
        rec.flag = RunFlag::Nonfinite;
        return rec;
    }
    Vec x_next = st.x;
    for (std::size_t i = 0; i < x_next.size(); ++i) {
        st.accumulator[i] += e.grad[i] * e.grad[i];
        const double denom = std::sqrt(st.accumulator[i]) + eps;
        if (denom > 0.0) x_next[i] -= lr * e.grad[i] / denom;
    }
    advance(st, std::move(x_next), std::move(e.grad), batch_seed);
    return rec;
}

TrajectoryRecord lbfgs_plain_step(OptimizerState& st, const GradientOracle& oracle, double lr,
                                  std::uint64_t batch_seed) {
    if (!st.plain_memory) throw InvalidInputError("lbfgs_plain_step: state has no pair memory");
    Eval e = oracle.eval(st.x, batch_seed);
    TrajectoryRecord rec = make_record(st, e, lr);
    if (!eval_is_finite(e)) {
        rec.flag = RunFlag::Nonfinite;
        return rec;
    }

    Vec x_next = st.x;
    try {
        if (st.x_prev && st.g_prev) {
            Vec s(st.x.size()), y(st.x.size());
            for (std::size_t i = 0; i < s.size(); ++i) {
                s[i] = st.x[i] - (*st.x_prev)[i];
                y[i] = e.grad[i] - (*st.g_prev)[i];
            }
            const double sy = all_zero(s) ? 0.0 : kern::dot(s, y);
            if (std::isfinite(sy) && sy > 0.0) {
                DampingConfig gamma_cfg;
                gamma_cfg.delta = 1.0;  // baseline convention
                st.plain_gamma = compute_gamma(s, y, gamma_cfg);
                st.plain_memory->push(CurvaturePair(std::move(s), std::move(y)));
            }
        }
        const Vec v = two_loop(*st.plain_memory, e.grad, 1.0 / st.plain_gamma);
        kern::axpy(-lr, v, x_next);
    } catch (const NumericalFailureError&) {
        rec.flag = RunFlag::Nonfinite;
        return rec;
    } catch (const InvalidInputError&) {
        rec.flag = RunFlag::Nonfinite;
        return rec;
    }
    advance(st, std::move(x_next), std::move(e.grad), batch_seed);
    return rec;
}

}  // namespace sqn
