#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sqn/optimizer.hpp"

namespace sqn {

enum class OptimizerKind { Sdlbfgs, Sdlbfgs0, Sgd, Adagrad, LbfgsPlain };
enum class ProblemKind { Rosenbrock2d, Quadratic, LogregSynth, MlpMnist, LogregMnist };

const char* to_string(OptimizerKind kind);
const char* to_string(ProblemKind kind);

/// Fully resolved experiment configuration. parse_config fills in the
/// per-optimizer defaults: quasi-Newton modes run the inv-sqrt schedule with
/// base 1, the first-order baselines a constant learning rate.
struct RunConfig {
    OptimizerKind optimizer = OptimizerKind::Sdlbfgs;
    ProblemKind problem = ProblemKind::Rosenbrock2d;
    StepSchedule schedule;
    std::size_t memory_size = 100;
    std::size_t batch_size = 64;
    double delta = 0.01;
    std::uint64_t iters = 1000;
    std::uint64_t epochs = 0;       // when nonzero, overrides iters
    std::uint64_t seed = 1;
    std::uint64_t eval_every = 0;   // 0 = once per epoch-equivalent
    double adagrad_eps = 1e-10;
    std::string mnist_dir;
    std::string out_path = "-";

    void validate() const;
};

/// Thrown by parse_config when --help is requested; carries the usage text.
struct HelpRequested {
    std::string text;
};

RunConfig parse_config(const std::vector<std::string>& args);
RunConfig parse_config(int argc, const char* const* argv);

using RecordSink = std::function<void(const TrajectoryRecord&)>;

/// Runs the configured optimizer for the budget, evaluating held-out
/// accuracy every eval_every iterations on learning problems. Terminates
/// early on a Converged or Nonfinite record. Deterministic given the config.
std::vector<TrajectoryRecord> run_experiment(const RunConfig& cfg, const RecordSink& sink = {});

struct RunSummary {
    std::string path;
    std::size_t records = 0;
    std::uint64_t final_iter = 0;
    double final_objective = 0.0;
    double best_objective = 0.0;
    std::optional<double> final_accuracy;
    std::optional<double> best_accuracy;
    RunFlag final_flag = RunFlag::Ok;
};

std::vector<RunSummary> summarize_runs(const std::vector<std::string>& paths);

/// Summary table (CSV on stdout-friendly text) plus a final `best,<path>`
/// line: highest final test accuracy wins, ties broken by lower final
/// objective, then by argument order.
std::string compare_runs(const std::vector<std::string>& paths);

}  // namespace sqn
