#include "sqn/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "sqn/dataset.hpp"
#include "sqn/objectives.hpp"
#include "sqn/rng.hpp"

namespace sqn {

namespace {

// Desk-scale problem constants.
constexpr std::size_t mnist_train_subset = 10000;
constexpr std::size_t mnist_test_subset = 2000;
constexpr std::size_t mlp_hidden_width = 32;
constexpr double classifier_l2 = 1e-4;

constexpr std::size_t blobs_per_class = 400;
constexpr std::size_t blobs_classes = 3;
constexpr std::size_t blobs_dim = 10;
constexpr double blobs_separation = 3.0;

}  // namespace

const char* to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Sdlbfgs: return "sdlbfgs";
        case OptimizerKind::Sdlbfgs0: return "sdlbfgs0";
        case OptimizerKind::Sgd: return "sgd";
        case OptimizerKind::Adagrad: return "adagrad";
        case OptimizerKind::LbfgsPlain: return "lbfgs";
    }
    return "sdlbfgs";
}

const char* to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Rosenbrock2d: return "rosenbrock2d";
        case ProblemKind::Quadratic: return "quadratic";
        case ProblemKind::LogregSynth: return "logreg-synth";
        case ProblemKind::MlpMnist: return "mlp-mnist";
        case ProblemKind::LogregMnist: return "logreg-mnist";
    }
    return "rosenbrock2d";
}

void RunConfig::validate() const {
    if (memory_size < 1) throw UsageError("--memory-size must be >= 1");
    if (batch_size < 1) throw UsageError("--batch-size must be >= 1");
    if (iters < 1 && epochs < 1) throw UsageError("--iters must be >= 1");
    if (!(schedule.base > 0.0) || !std::isfinite(schedule.base)) {
        throw UsageError("--lr must be positive and finite");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) throw UsageError("--delta must be positive");
    if (schedule.kind == ScheduleKind::InversePower &&
        (!(schedule.beta > 0.5) || !(schedule.beta < 1.0))) {
        throw UsageError("--beta must lie in (0.5, 1)");
    }
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{
        "sqn_run: stochastic quasi-Newton experiment runner.\n"
        "Executes one optimizer on one problem and streams a trajectory CSV\n"
        "(iter,objective,grad_norm,alpha,test_accuracy,flag)."};
    app.get_formatter()->column_width(34);

    const std::map<std::string, OptimizerKind> optimizer_names{
        {"sdlbfgs", OptimizerKind::Sdlbfgs},
        {"sdlbfgs0", OptimizerKind::Sdlbfgs0},
        {"sgd", OptimizerKind::Sgd},
        {"adagrad", OptimizerKind::Adagrad},
        {"lbfgs", OptimizerKind::LbfgsPlain}};
    const std::map<std::string, ProblemKind> problem_names{
        {"rosenbrock2d", ProblemKind::Rosenbrock2d},
        {"quadratic", ProblemKind::Quadratic},
        {"logreg-synth", ProblemKind::LogregSynth},
        {"mlp-mnist", ProblemKind::MlpMnist},
        {"logreg-mnist", ProblemKind::LogregMnist}};
    const std::map<std::string, ScheduleKind> schedule_names{
        {"inv-sqrt", ScheduleKind::InverseSqrt},
        {"constant", ScheduleKind::Constant},
        {"inv-power", ScheduleKind::InversePower}};

    RunConfig cfg;
    double lr = 0.0;
    app.add_option("--optimizer", cfg.optimizer, "Optimizer (default sdlbfgs)")
        ->transform(CLI::CheckedTransformer(optimizer_names));
    app.add_option("--problem", cfg.problem, "Objective (default rosenbrock2d)")
        ->transform(CLI::CheckedTransformer(problem_names));
    auto* lr_opt = app.add_option(
        "--lr", lr, "Base step size (default 1 for sdlbfgs/sdlbfgs0, 0.01 otherwise)");
    auto* sched_opt =
        app.add_option("--schedule", cfg.schedule.kind,
                       "Step-size schedule (default inv-sqrt for sdlbfgs/sdlbfgs0, constant "
                       "otherwise)")
            ->transform(CLI::CheckedTransformer(schedule_names));
    app.add_option("--beta", cfg.schedule.beta, "Exponent for inv-power, in (0.5, 1)");
    app.add_option("--memory-size", cfg.memory_size, "Curvature-pair memory size (default 100)")
        ->check(CLI::PositiveNumber);
    app.add_option("--batch-size", cfg.batch_size, "Minibatch size (default 64)")
        ->check(CLI::PositiveNumber);
    auto* delta_opt = app.add_option(
        "--delta", cfg.delta, "Gamma clamp for sdlbfgs0 (default 0.01; lbfgs baseline uses 1)");
    app.add_option("--iters", cfg.iters, "Iteration budget (default 1000)")
        ->check(CLI::PositiveNumber);
    auto* epochs_opt = app.add_option("--epochs", cfg.epochs,
                                      "Epoch budget for dataset problems (overrides --iters)")
                           ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Run seed (default 1)");
    app.add_option("--eval-every", cfg.eval_every,
                   "Iterations between test-accuracy evaluations (default: once per epoch)");
    app.add_option("--mnist-dir", cfg.mnist_dir,
                   "Directory holding uncompressed MNIST IDX files (mnist problems)");
    app.add_option("--out", cfg.out_path, "Trajectory CSV path (default '-', stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    const bool quasi_newton =
        cfg.optimizer == OptimizerKind::Sdlbfgs || cfg.optimizer == OptimizerKind::Sdlbfgs0;
    if (sched_opt->count() == 0) {
        cfg.schedule.kind = quasi_newton ? ScheduleKind::InverseSqrt : ScheduleKind::Constant;
    }
    cfg.schedule.base = lr_opt->count() ? lr : (quasi_newton ? 1.0 : 0.01);
    if (delta_opt->count() == 0 && cfg.optimizer == OptimizerKind::LbfgsPlain) cfg.delta = 1.0;

    if (epochs_opt->count()) {
        const bool dataset_problem = cfg.problem == ProblemKind::LogregSynth ||
                                     cfg.problem == ProblemKind::MlpMnist ||
                                     cfg.problem == ProblemKind::LogregMnist;
        if (!dataset_problem) throw UsageError("--epochs requires a dataset-backed problem");
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return parse_config(args);
}

namespace {

struct ProblemSetup {
    std::shared_ptr<GradientOracle> oracle;
    std::shared_ptr<ClassificationOracle> classifier;  // null for deterministic problems
    std::shared_ptr<const Dataset> test_set;
    std::size_t train_size = 0;
};

std::pair<std::shared_ptr<const Dataset>, std::shared_ptr<const Dataset>> load_mnist_subsets(
    const RunConfig& cfg) {
    if (cfg.mnist_dir.empty()) {
        throw UsageError("--mnist-dir is required for the mnist problems");
    }
    const Dataset train_full = load_idx_dataset(cfg.mnist_dir + "/train-images-idx3-ubyte",
                                                cfg.mnist_dir + "/train-labels-idx1-ubyte");
    const Dataset test_full = load_idx_dataset(cfg.mnist_dir + "/t10k-images-idx3-ubyte",
                                               cfg.mnist_dir + "/t10k-labels-idx1-ubyte");
    const std::size_t n_train = std::min(mnist_train_subset, train_full.n);
    const std::size_t n_test = std::min(mnist_test_subset, test_full.n);
    auto train = std::make_shared<Dataset>(subset(train_full, n_train, 0, cfg.seed).first);
    auto test =
        std::make_shared<Dataset>(subset(test_full, n_test, 0, mix_seed(cfg.seed, 0x7e57)).first);
    // A narrow subset may miss the top classes; keep the full label space so
    // train and test agree on the logit width.
    train->num_classes = std::max(train_full.num_classes, test_full.num_classes);
    test->num_classes = train->num_classes;
    return {train, test};
}

ProblemSetup build_problem(const RunConfig& cfg) {
    ProblemSetup setup;
    switch (cfg.problem) {
        case ProblemKind::Rosenbrock2d:
            setup.oracle = std::make_shared<RosenbrockOracle>();
            return setup;
        case ProblemKind::Quadratic:
            setup.oracle = std::make_shared<QuadraticOracle>(Vec{3.0, 4.0});
            return setup;
        case ProblemKind::LogregSynth: {
            const Dataset blobs = synthetic_blobs(blobs_per_class, blobs_classes, blobs_dim,
                                                  blobs_separation, cfg.seed);
            auto [train, test] = subset(blobs, blobs.n * 4 / 5, blobs.n - blobs.n * 4 / 5,
                                        mix_seed(cfg.seed, 0x5b5e7));
            auto train_ptr = std::make_shared<const Dataset>(std::move(train));
            setup.test_set = std::make_shared<const Dataset>(std::move(test));
            setup.classifier = std::make_shared<LogisticRegressionOracle>(
                train_ptr, classifier_l2, cfg.batch_size);
            setup.train_size = train_ptr->n;
            break;
        }
        case ProblemKind::MlpMnist: {
            auto [train, test] = load_mnist_subsets(cfg);
            setup.test_set = test;
            setup.classifier = std::make_shared<MlpOracle>(
                train,
                std::vector<std::size_t>{train->d, mlp_hidden_width, train->num_classes},
                cfg.batch_size);
            setup.train_size = train->n;
            break;
        }
        case ProblemKind::LogregMnist: {
            auto [train, test] = load_mnist_subsets(cfg);
            setup.test_set = test;
            setup.classifier =
                std::make_shared<LogisticRegressionOracle>(train, classifier_l2, cfg.batch_size);
            setup.train_size = train->n;
            break;
        }
    }
    setup.oracle = setup.classifier;
    return setup;
}

OptimizerState make_state(const RunConfig& cfg, Vec x0) {
    switch (cfg.optimizer) {
        case OptimizerKind::Sdlbfgs:
            return make_sdlbfgs_state(std::move(x0), cfg.memory_size, cfg.delta);
        case OptimizerKind::Sdlbfgs0:
            return make_sdlbfgs0_state(std::move(x0), cfg.memory_size, cfg.delta);
        case OptimizerKind::Sgd:
            return make_sgd_state(std::move(x0));
        case OptimizerKind::Adagrad:
            return make_adagrad_state(std::move(x0));
        case OptimizerKind::LbfgsPlain:
            return make_lbfgs_plain_state(std::move(x0), cfg.memory_size);
    }
    throw InvalidInputError("unknown optimizer kind");
}

}  // namespace

std::vector<TrajectoryRecord> run_experiment(const RunConfig& cfg, const RecordSink& sink) {
    cfg.validate();
    const ProblemSetup setup = build_problem(cfg);

    const std::size_t per_epoch =
        setup.train_size ? (setup.train_size + cfg.batch_size - 1) / cfg.batch_size : 0;
    std::uint64_t iters = cfg.iters;
    if (cfg.epochs) {
        if (per_epoch == 0) throw UsageError("--epochs requires a dataset-backed problem");
        iters = cfg.epochs * per_epoch;
    }
    const std::uint64_t eval_every = cfg.eval_every ? cfg.eval_every : per_epoch;

    OptimizerState state = make_state(cfg, setup.oracle->initial_point(cfg.seed));

    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(iters, 1u << 20)));
    for (std::uint64_t k = 1; k <= iters; ++k) {
        const std::uint64_t batch_seed = make_batch_seed(cfg.seed, k);
        std::optional<double> accuracy;
        if (setup.classifier && eval_every != 0 && (k % eval_every == 0 || k == iters)) {
            accuracy = setup.classifier->accuracy(state.x, *setup.test_set);
        }

        TrajectoryRecord rec;
        try {
            switch (cfg.optimizer) {
                case OptimizerKind::Sdlbfgs:
                    rec = sdlbfgs_step(state, *setup.oracle, cfg.schedule, batch_seed);
                    break;
                case OptimizerKind::Sdlbfgs0:
                    rec = sdlbfgs0_step(state, *setup.oracle, cfg.schedule, batch_seed);
                    break;
                case OptimizerKind::Sgd:
                    rec = sgd_step(state, *setup.oracle, schedule_alpha(cfg.schedule, k),
                                   batch_seed);
                    break;
                case OptimizerKind::Adagrad:
                    rec = adagrad_step(state, *setup.oracle, schedule_alpha(cfg.schedule, k),
                                       cfg.adagrad_eps, batch_seed);
                    break;
                case OptimizerKind::LbfgsPlain:
                    rec = lbfgs_plain_step(state, *setup.oracle, schedule_alpha(cfg.schedule, k),
                                           batch_seed);
                    break;
            }
        } catch (const StepFailure& failure) {
            rec = failure.record();  // logged as data; the flag ends the run
        }
        rec.test_accuracy = accuracy;
        records.push_back(rec);
        if (sink) sink(rec);
        if (rec.flag != RunFlag::Ok) break;
    }
    return records;
}

std::vector<RunSummary> summarize_runs(const std::vector<std::string>& paths) {
    std::vector<RunSummary> out;
    for (const auto& path : paths) {
        const auto records = read_csv(path);
        if (records.empty()) throw FormatError(path + ": no records");
        RunSummary s;
        s.path = path;
        s.records = records.size();
        s.final_iter = records.back().iter;
        s.final_objective = records.back().objective;
        s.final_flag = records.back().flag;
        s.best_objective = records.front().objective;
        for (const auto& r : records) {
            if (!(r.objective >= s.best_objective)) s.best_objective = r.objective;  // min, NaN-safe
            if (r.test_accuracy) {
                s.final_accuracy = r.test_accuracy;
                if (!s.best_accuracy || *r.test_accuracy > *s.best_accuracy) {
                    s.best_accuracy = r.test_accuracy;
                }
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string compare_runs(const std::vector<std::string>& paths) {
    if (paths.empty()) throw InvalidInputError("compare_runs: no input files");
    const auto summaries = summarize_runs(paths);

    std::ostringstream out;
    out << "path,records,final_iter,final_objective,best_objective,final_accuracy,best_accuracy,"
           "final_flag\n";
    for (const auto& s : summaries) {
        out << s.path << ',' << s.records << ',' << s.final_iter << ','
            << format_double(s.final_objective) << ',' << format_double(s.best_objective) << ',';
        if (s.final_accuracy) out << format_double(*s.final_accuracy);
        out << ',';
        if (s.best_accuracy) out << format_double(*s.best_accuracy);
        out << ',' << to_string(s.final_flag) << '\n';
    }

    // Best run: highest final accuracy, ties by lower final objective, then
    // by argument order.
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 1; i < summaries.size(); ++i) {
        const double acc_best = summaries[best].final_accuracy.value_or(neg_inf);
        const double acc_i = summaries[i].final_accuracy.value_or(neg_inf);
        const double obj_best = std::isnan(summaries[best].final_objective)
                                    ? std::numeric_limits<double>::infinity()
                                    : summaries[best].final_objective;
        const double obj_i = std::isnan(summaries[i].final_objective)
                                 ? std::numeric_limits<double>::infinity()
                                 : summaries[i].final_objective;
        if (acc_i > acc_best || (acc_i == acc_best && obj_i < obj_best)) best = i;
    }
    out << "best," << summaries[best].path << '\n';
    return out.str();
}

}  // namespace sqn
