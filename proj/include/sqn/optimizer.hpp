#pragma once

#include <optional>

#include "sqn/direction.hpp"
#include "sqn/errors.hpp"
#include "sqn/oracle.hpp"
#include "sqn/schedule.hpp"
#include "sqn/trajectory.hpp"

namespace sqn {

/// Per-run mutable state shared by all optimizers. Quasi-Newton modes own a
/// DirectionEngine, adagrad its accumulator, and the plain L-BFGS baseline
/// its raw-pair memory. x_prev/g_prev are absent exactly while k = 1.
struct OptimizerState {
    Vec x;
    std::optional<Vec> x_prev;
    std::optional<Vec> g_prev;
    std::optional<std::uint64_t> prev_batch_seed;
    std::uint64_t k = 1;

    std::optional<DirectionEngine> engine;
    std::optional<CurvatureMemory> plain_memory;
    double plain_gamma = 1.0;
    Vec accumulator;
    bool variance_reduced = false;
};

OptimizerState make_sdlbfgs_state(Vec x0, std::size_t memory_size, double delta = 0.01,
                                  double norm_floor = 1e-10, bool variance_reduced = false);
OptimizerState make_sdlbfgs0_state(Vec x0, std::size_t memory_size, double delta = 0.01,
                                   bool variance_reduced = false);
OptimizerState make_sgd_state(Vec x0);
OptimizerState make_adagrad_state(Vec x0);
OptimizerState make_lbfgs_plain_state(Vec x0, std::size_t memory_size);

/// Thrown by sdlbfgs_step on non-finite objective or gradient; carries the
/// flagged record so a runner can log the failure as data.
class StepFailure : public NumericalFailureError {
  public:
    StepFailure(const std::string& msg, TrajectoryRecord record)
        : NumericalFailureError(msg), record_(record) {}
    const TrajectoryRecord& record() const noexcept { return record_; }

  private:
    TrajectoryRecord record_;
};

// One optimizer update each. The record carries the pre-step objective,
// gradient norm, and step size at iterate x_k; Converged and Nonfinite
// records leave x unchanged. All steps advance k by exactly 1 except a
// Nonfinite step, which is terminal and leaves the state untouched.

/// Damped L-BFGS with identity re-initialization and unit-norm directions;
/// x_{k+1} = x_k - alpha_k d_k. Non-finite evaluations throw StepFailure.
TrajectoryRecord sdlbfgs_step(OptimizerState& state, const GradientOracle& oracle,
                              const StepSchedule& sched, std::uint64_t batch_seed);

/// Same loop with H_{k,0} = gamma_k^{-1} I and no normalization. Divergence
/// is expected behaviour: non-finite values come back flagged, never thrown.
TrajectoryRecord sdlbfgs0_step(OptimizerState& state, const GradientOracle& oracle,
                               const StepSchedule& sched, std::uint64_t batch_seed);

/// x <- x - lr * g.
TrajectoryRecord sgd_step(OptimizerState& state, const GradientOracle& oracle, double lr,
                          std::uint64_t batch_seed);

/// a <- a + g * g; x <- x - lr * g / (sqrt(a) + eps), element-wise.
TrajectoryRecord adagrad_step(OptimizerState& state, const GradientOracle& oracle, double lr,
                              double eps, std::uint64_t batch_seed);

/// Undamped two-loop baseline: raw (s, y) pairs, skipped when s.y <= 0,
/// H_{k,0} = gamma_k^{-1} I with delta = 1, fixed step, no normalization.
TrajectoryRecord lbfgs_plain_step(OptimizerState& state, const GradientOracle& oracle, double lr,
                                  std::uint64_t batch_seed);

}  // namespace sqn
