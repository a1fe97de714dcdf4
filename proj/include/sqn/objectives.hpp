#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sqn/dataset.hpp"
#include "sqn/oracle.hpp"

namespace sqn {

/// f(x) = 100 (x1^2 - x2)^2 + (x1 - 1)^2 and its analytic gradient.
/// Overflow reports non-finite values, never throws.
Eval rosenbrock_eval(const Vec& x);

class RosenbrockOracle final : public GradientOracle {
  public:
    std::size_t dim() const override { return 2; }
    Eval eval(const Vec& x, std::uint64_t) const override { return rosenbrock_eval(x); }
    Eval full_eval(const Vec& x) const override { return rosenbrock_eval(x); }
    Vec initial_point(std::uint64_t) const override { return {-1.2, 1.0}; }
};

/// f(x) = 0.5 |x|^2, gradient x. Deterministic.
class QuadraticOracle final : public GradientOracle {
  public:
    explicit QuadraticOracle(Vec start) : start_(std::move(start)) {}
    std::size_t dim() const override { return start_.size(); }
    Eval eval(const Vec& x, std::uint64_t) const override { return full_eval(x); }
    Eval full_eval(const Vec& x) const override;
    Vec initial_point(std::uint64_t) const override { return start_; }

  private:
    Vec start_;
};

/// Classification oracles additionally score argmax accuracy on a dataset.
class ClassificationOracle : public GradientOracle {
  public:
    virtual double accuracy(const Vec& params, const Dataset& data) const = 0;
};

/// Multinomial softmax regression with cross-entropy loss and an optional
/// l2/2 |W|^2 penalty (biases unpenalized). Parameters are W (C x d,
/// row-major) followed by the C biases; the zero vector is the start point.
class LogisticRegressionOracle final : public ClassificationOracle {
  public:
    LogisticRegressionOracle(std::shared_ptr<const Dataset> data, double l2,
                             std::size_t batch_size);

    std::size_t dim() const override;
    Eval eval(const Vec& params, std::uint64_t batch_seed) const override;
    Eval full_eval(const Vec& params) const override;
    Vec initial_point(std::uint64_t) const override { return Vec(dim(), 0.0); }
    double accuracy(const Vec& params, const Dataset& data) const override;

  private:
    std::shared_ptr<const Dataset> data_;
    double l2_;
    std::size_t batch_size_;
};

/// Fully-connected network with logistic-sigmoid hidden layers, softmax
/// output, mean cross-entropy loss, and hand-written backpropagation.
/// Parameters are one flat vector, per layer W (out x in, row-major) then
/// biases; weights start uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] from
/// the run seed, biases at zero.
class MlpOracle final : public ClassificationOracle {
  public:
    MlpOracle(std::shared_ptr<const Dataset> data, std::vector<std::size_t> layers,
              std::size_t batch_size);

    std::size_t dim() const override { return n_params_; }
    Eval eval(const Vec& params, std::uint64_t batch_seed) const override;
    Eval full_eval(const Vec& params) const override;
    Vec initial_point(std::uint64_t seed) const override;
    double accuracy(const Vec& params, const Dataset& data) const override;

    const std::vector<std::size_t>& layers() const { return layers_; }

  private:
    Eval eval_rows(const Vec& params, std::span<const double> rows,
                   std::span<const int> labels, std::size_t count) const;
    void forward_logits(const Vec& params, std::span<const double> rows, std::size_t count,
                        std::vector<double>& logits) const;

    std::shared_ptr<const Dataset> data_;
    std::vector<std::size_t> layers_;
    std::vector<std::size_t> weight_offsets_;  // per layer: W offset; bias follows W
    std::size_t n_params_ = 0;
    std::size_t batch_size_;
};

/// Max over coordinates of |g_i - fd_i| / (1 + |g_i|) comparing the analytic
/// gradient against central finite differences of the full objective.
double finite_difference_check(const GradientOracle& oracle, const Vec& x, double h);
/// Same check against a fixed minibatch.
double finite_difference_check(const GradientOracle& oracle, const Vec& x, double h,
                               std::uint64_t batch_seed);

/// Row indices of the minibatch encoded by batch_seed: epoch-level seeded
/// shuffle of 0..n-1, partitioned into consecutive batches.
std::vector<std::uint32_t> minibatch_indices(std::size_t n, std::size_t batch_size,
                                             std::uint64_t batch_seed);

}  // namespace sqn
