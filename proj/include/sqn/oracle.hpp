#pragma once

#include <cstdint>

#include "sqn/vec_ops.hpp"

namespace sqn {

struct Eval {
    double value = 0.0;
    Vec grad;
};

/// Objective value + stochastic gradient source. Implementations are
/// immutable after construction and carry no hidden evaluation state, so
/// identical (x, batch_seed) always returns identical results.
class GradientOracle {
  public:
    virtual ~GradientOracle() = default;

    virtual std::size_t dim() const = 0;

    /// Minibatch objective and gradient. Deterministic objectives ignore
    /// batch_seed and behave like full_eval.
    virtual Eval eval(const Vec& x, std::uint64_t batch_seed) const = 0;

    /// Whole-dataset objective and gradient.
    virtual Eval full_eval(const Vec& x) const = 0;

    /// Starting iterate for a run on this objective.
    virtual Vec initial_point(std::uint64_t seed) const = 0;
};

// Batch seeds pack (run_seed, step) so any minibatch can be re-derived in
// isolation: the oracle unpacks them, shuffles the epoch order from
// (run_seed, epoch), and slices consecutive batches.
constexpr std::uint64_t make_batch_seed(std::uint64_t run_seed, std::uint64_t step) {
    return (run_seed << 32) | (step & 0xffffffffull);
}
constexpr std::uint64_t batch_seed_run(std::uint64_t batch_seed) { return batch_seed >> 32; }
constexpr std::uint64_t batch_seed_step(std::uint64_t batch_seed) {
    return batch_seed & 0xffffffffull;
}

}  // namespace sqn
