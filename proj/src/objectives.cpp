#include "sqn/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqn/errors.hpp"
#include "sqn/rng.hpp"

namespace sqn {

Eval rosenbrock_eval(const Vec& x) {
    if (x.size() != 2) throw InvalidInputError("rosenbrock_eval: expects dimension 2");
    const double a = x[0] * x[0] - x[1];
    Eval out;
    out.value = 100.0 * a * a + (x[0] - 1.0) * (x[0] - 1.0);
    out.grad = {400.0 * x[0] * a + 2.0 * (x[0] - 1.0), -200.0 * a};
    return out;
}

Eval QuadraticOracle::full_eval(const Vec& x) const {
    if (x.size() != start_.size()) throw InvalidInputError("quadratic: dimension mismatch");
    Eval out;
    out.value = 0.5 * kern::dot(x, x);
    out.grad = x;
    return out;
}

std::vector<std::uint32_t> minibatch_indices(std::size_t n, std::size_t batch_size,
                                             std::uint64_t batch_seed) {
    if (n == 0 || batch_size == 0) throw InvalidInputError("minibatch_indices: empty data or batch");
    const std::uint64_t run = batch_seed_run(batch_seed);
    const std::uint64_t step = std::max<std::uint64_t>(batch_seed_step(batch_seed), 1);
    const std::size_t per_epoch = (n + batch_size - 1) / batch_size;
    const std::uint64_t epoch = (step - 1) / per_epoch;
    const std::size_t pos = static_cast<std::size_t>((step - 1) % per_epoch);

    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    Rng rng(mix_seed(mix_seed(run, 0xe90c4ull), epoch));
    rng.shuffle(order);

    const std::size_t lo = pos * batch_size;
    const std::size_t hi = std::min(n, lo + batch_size);
    return std::vector<std::uint32_t>(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                      order.begin() + static_cast<std::ptrdiff_t>(hi));
}

namespace {

void check_classification_inputs(const std::shared_ptr<const Dataset>& data,
                                 std::size_t batch_size, const char* who) {
    if (!data || data->n == 0) throw InvalidInputError(std::string(who) + ": empty dataset");
    if (data->num_classes < 2) throw InvalidInputError(std::string(who) + ": need >= 2 classes");
    if (batch_size == 0) throw InvalidInputError(std::string(who) + ": batch size must be >= 1");
    if (batch_size > data->n) {
        throw InvalidInputError(std::string(who) + ": batch size " + std::to_string(batch_size) +
                                " exceeds dataset size " + std::to_string(data->n));
    }
    if (!all_finite(data->features)) {
        throw InvalidInputError(std::string(who) + ": dataset features must be finite");
    }
}

std::vector<double> gather_rows(const Dataset& data, std::span<const std::uint32_t> idx) {
    std::vector<double> rows(idx.size() * data.d);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto r = data.row(idx[i]);
        std::copy(r.begin(), r.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * data.d));
    }
    return rows;
}

std::vector<int> gather_labels(const Dataset& data, std::span<const std::uint32_t> idx) {
    std::vector<int> labels(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = data.labels[idx[i]];
    return labels;
}

void add_bias_rows(std::vector<double>& z, std::span<const double> bias, std::size_t count,
                   std::size_t classes) {
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t c = 0; c < classes; ++c) z[i * classes + c] += bias[c];
    }
}

// Turns logits into probabilities in place and returns the mean cross
// entropy against labels.
double softmax_ce_rows(std::vector<double>& z, std::span<const int> labels, std::size_t count,
                       std::size_t classes) {
    double loss = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double* zi = z.data() + i * classes;
        double zmax = zi[0];
        for (std::size_t c = 1; c < classes; ++c) zmax = std::max(zmax, zi[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            zi[c] = std::exp(zi[c] - zmax);
            sum += zi[c];
        }
        const std::size_t t = static_cast<std::size_t>(labels[i]);
        loss += std::log(sum) - std::log(zi[t]);
        for (std::size_t c = 0; c < classes; ++c) zi[c] /= sum;
    }
    return loss / static_cast<double>(count);
}

// probabilities -> (P - onehot) / count
void to_mean_delta(std::vector<double>& probs, std::span<const int> labels, std::size_t count,
                   std::size_t classes) {
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        probs[i * classes + static_cast<std::size_t>(labels[i])] -= 1.0;
        for (std::size_t c = 0; c < classes; ++c) probs[i * classes + c] *= inv;
    }
}

void column_sums(std::span<const double> m, std::size_t count, std::size_t cols,
                 std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t c = 0; c < cols; ++c) out[c] += m[i * cols + c];
    }
}

std::size_t argmax_row(std::span<const double> row) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
        if (row[c] > row[best]) best = c;
    }
    return best;
}

}  // namespace

LogisticRegressionOracle::LogisticRegressionOracle(std::shared_ptr<const Dataset> data, double l2,
                                                   std::size_t batch_size)
    : data_(std::move(data)), l2_(l2), batch_size_(batch_size) {
    check_classification_inputs(data_, batch_size_, "logistic_regression_oracle");
    if (!(l2_ >= 0.0) || !std::isfinite(l2_)) {
        throw InvalidInputError("logistic_regression_oracle: l2 must be non-negative and finite");
    }
}

std::size_t LogisticRegressionOracle::dim() const {
    return data_->num_classes * data_->d + data_->num_classes;
}

namespace {

Eval logreg_eval_rows(const Dataset& schema, const Vec& params, double l2,
                      std::span<const double> rows, std::span<const int> labels,
                      std::size_t count) {
    const std::size_t d = schema.d;
    const std::size_t classes = schema.num_classes;
    std::span<const double> w(params.data(), classes * d);
    std::span<const double> b(params.data() + classes * d, classes);

    std::vector<double> z(count * classes);
    kern::matmul_nt(rows, w, z, count, d, classes);
    add_bias_rows(z, b, count, classes);
    double loss = softmax_ce_rows(z, labels, count, classes);
    to_mean_delta(z, labels, count, classes);

    Eval out;
    out.grad.assign(params.size(), 0.0);
    std::span<double> gw(out.grad.data(), classes * d);
    std::span<double> gb(out.grad.data() + classes * d, classes);
    kern::matmul_tn(z, rows, gw, classes, count, d);
    column_sums(z, count, classes, gb);
    if (l2 > 0.0) {
        double penalty = 0.0;
        for (std::size_t i = 0; i < classes * d; ++i) {
            penalty += w[i] * w[i];
            gw[i] += l2 * w[i];
        }
        loss += 0.5 * l2 * penalty;
    }
    out.value = loss;
    return out;
}

}  // namespace

Eval LogisticRegressionOracle::eval(const Vec& params, std::uint64_t batch_seed) const {
    if (params.size() != dim()) throw InvalidInputError("logreg eval: parameter size mismatch");
    const auto idx = minibatch_indices(data_->n, batch_size_, batch_seed);
    const auto rows = gather_rows(*data_, idx);
    const auto labels = gather_labels(*data_, idx);
    return logreg_eval_rows(*data_, params, l2_, rows, labels, idx.size());
}

Eval LogisticRegressionOracle::full_eval(const Vec& params) const {
    if (params.size() != dim()) throw InvalidInputError("logreg full_eval: parameter size mismatch");
    return logreg_eval_rows(*data_, params, l2_, data_->features, data_->labels, data_->n);
}

double LogisticRegressionOracle::accuracy(const Vec& params, const Dataset& data) const {
    if (data.d != data_->d) throw InvalidInputError("logreg accuracy: feature width mismatch");
    if (data.n == 0) return 0.0;
    const std::size_t classes = data_->num_classes;
    std::span<const double> w(params.data(), classes * data.d);
    std::span<const double> b(params.data() + classes * data.d, classes);
    std::vector<double> z(data.n * classes);
    kern::matmul_nt(data.features, w, z, data.n, data.d, classes);
    add_bias_rows(z, b, data.n, classes);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.n; ++i) {
        const std::span<const double> zi(z.data() + i * classes, classes);
        if (argmax_row(zi) == static_cast<std::size_t>(data.labels[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.n);
}

MlpOracle::MlpOracle(std::shared_ptr<const Dataset> data, std::vector<std::size_t> layers,
                     std::size_t batch_size)
    : data_(std::move(data)), layers_(std::move(layers)), batch_size_(batch_size) {
    check_classification_inputs(data_, batch_size_, "mlp_oracle");
    if (layers_.size() < 2) throw InvalidInputError("mlp_oracle: need at least input and output layers");
    for (std::size_t width : layers_) {
        if (width == 0) throw InvalidInputError("mlp_oracle: zero-width layer");
    }
    if (layers_.front() != data_->d) {
        throw InvalidInputError("mlp_oracle: input width " + std::to_string(layers_.front()) +
                                " does not match feature dimension " + std::to_string(data_->d));
    }
    if (layers_.back() != data_->num_classes) {
        throw InvalidInputError("mlp_oracle: output width " + std::to_string(layers_.back()) +
                                " does not match class count " + std::to_string(data_->num_classes));
    }
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        weight_offsets_.push_back(n_params_);
        n_params_ += layers_[l + 1] * layers_[l] + layers_[l + 1];
    }
}

Vec MlpOracle::initial_point(std::uint64_t seed) const {
    Rng rng(mix_seed(seed, 0x331712ull));
    Vec params(n_params_, 0.0);
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        const std::size_t fan_in = layers_[l];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        double* w = params.data() + weight_offsets_[l];
        for (std::size_t i = 0; i < layers_[l + 1] * fan_in; ++i) w[i] = rng.uniform(-bound, bound);
        // biases stay zero
    }
    return params;
}

Eval MlpOracle::eval(const Vec& params, std::uint64_t batch_seed) const {
    if (params.size() != n_params_) throw InvalidInputError("mlp eval: parameter size mismatch");
    const auto idx = minibatch_indices(data_->n, batch_size_, batch_seed);
    const auto rows = gather_rows(*data_, idx);
    const auto labels = gather_labels(*data_, idx);
    return eval_rows(params, rows, labels, idx.size());
}

Eval MlpOracle::full_eval(const Vec& params) const {
    if (params.size() != n_params_) throw InvalidInputError("mlp full_eval: parameter size mismatch");
    return eval_rows(params, data_->features, data_->labels, data_->n);
}

Eval MlpOracle::eval_rows(const Vec& params, std::span<const double> rows,
                          std::span<const int> labels, std::size_t count) const {
    const std::size_t n_layers = layers_.size() - 1;  // weighted layers
    // activations[l] holds A_l for l = 1..n_layers; A_0 is `rows`.
    std::vector<std::vector<double>> activations(n_layers);
    std::span<const double> a_prev = rows;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t in = layers_[l];
        const std::size_t out = layers_[l + 1];
        std::span<const double> w(params.data() + weight_offsets_[l], out * in);
        std::span<const double> b(params.data() + weight_offsets_[l] + out * in, out);
        auto& z = activations[l];
        z.resize(count * out);
        kern::matmul_nt(a_prev, w, z, count, in, out);
        add_bias_rows(z, b, count, out);
        if (l + 1 < n_layers) {
            for (double& v : z) v = 1.0 / (1.0 + std::exp(-v));  // logistic sigmoid
        }
        a_prev = z;
    }

    Eval out_eval;
    out_eval.value = softmax_ce_rows(activations.back(), labels, count, layers_.back());
    to_mean_delta(activations.back(), labels, count, layers_.back());

    out_eval.grad.assign(n_params_, 0.0);
    std::vector<double> delta = std::move(activations.back());
    for (std::size_t l = n_layers; l-- > 0;) {
        const std::size_t in = layers_[l];
        const std::size_t out = layers_[l + 1];
        std::span<const double> a_in =
            l == 0 ? rows : std::span<const double>(activations[l - 1]);
        std::span<double> gw(out_eval.grad.data() + weight_offsets_[l], out * in);
        std::span<double> gb(out_eval.grad.data() + weight_offsets_[l] + out * in, out);
        kern::matmul_tn(delta, a_in, gw, out, count, in);
        column_sums(delta, count, out, gb);
        if (l > 0) {
            std::span<const double> w(params.data() + weight_offsets_[l], out * in);
            std::vector<double> delta_prev(count * in);
            kern::matmul_nn(delta, w, delta_prev, count, out, in);
            const auto& a = activations[l - 1];
            for (std::size_t i = 0; i < delta_prev.size(); ++i) {
                delta_prev[i] *= a[i] * (1.0 - a[i]);  // sigmoid'
            }
            delta = std::move(delta_prev);
        }
    }
    return out_eval;
}

void MlpOracle::forward_logits(const Vec& params, std::span<const double> rows, std::size_t count,
                               std::vector<double>& logits) const {
    const std::size_t n_layers = layers_.size() - 1;
    std::vector<double> buf;
    std::span<const double> a_prev = rows;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t in = layers_[l];
        const std::size_t out = layers_[l + 1];
        std::span<const double> w(params.data() + weight_offsets_[l], out * in);
        std::span<const double> b(params.data() + weight_offsets_[l] + out * in, out);
        std::vector<double> z(count * out);
        kern::matmul_nt(a_prev, w, z, count, in, out);
        add_bias_rows(z, b, count, out);
        if (l + 1 < n_layers) {
            for (double& v : z) v = 1.0 / (1.0 + std::exp(-v));
        }
        buf = std::move(z);
        a_prev = buf;
    }
    logits = std::move(buf);
}

double MlpOracle::accuracy(const Vec& params, const Dataset& data) const {
    if (data.d != layers_.front()) throw InvalidInputError("mlp accuracy: feature width mismatch");
    if (data.n == 0) return 0.0;
    std::vector<double> logits;
    forward_logits(params, data.features, data.n, logits);
    const std::size_t classes = layers_.back();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.n; ++i) {
        const std::span<const double> zi(logits.data() + i * classes, classes);
        if (argmax_row(zi) == static_cast<std::size_t>(data.labels[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.n);
}

namespace {

template <typename EvalFn>
double fd_check_impl(EvalFn&& evaluate, const Vec& x, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidInputError("finite_difference_check: h must be positive and finite");
    }
    const Eval base = evaluate(x);
    if (!std::isfinite(base.value) || !all_finite(base.grad)) {
        throw NumericalFailureError("finite_difference_check: non-finite evaluation at base point");
    }
    Vec probe = x;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = evaluate(probe).value;
        probe[i] = x[i] - h;
        const double fm = evaluate(probe).value;
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericalFailureError("finite_difference_check: non-finite probe evaluation");
        }
        const double fd = (fp - fm) / (2.0 * h);
        worst = std::max(worst, std::fabs(base.grad[i] - fd) / (1.0 + std::fabs(base.grad[i])));
    }
    return worst;
}

}  // namespace

double finite_difference_check(const GradientOracle& oracle, const Vec& x, double h) {
    return fd_check_impl([&](const Vec& p) { return oracle.full_eval(p); }, x, h);
}

double finite_difference_check(const GradientOracle& oracle, const Vec& x, double h,
                               std::uint64_t batch_seed) {
    return fd_check_impl([&](const Vec& p) { return oracle.eval(p, batch_seed); }, x, h);
}

}  // namespace sqn
