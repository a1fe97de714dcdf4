#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace sqn {

enum class RunFlag { Ok, Converged, Nonfinite };

const char* to_string(RunFlag flag);
RunFlag run_flag_from_string(const std::string& s);

/// One logged row of a training run. `iter` counts from 1 and is strictly
/// increasing within a run; Converged and Nonfinite are terminal.
struct TrajectoryRecord {
    std::uint64_t iter = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double alpha = 0.0;
    std::optional<double> test_accuracy;
    RunFlag flag = RunFlag::Ok;
};

inline constexpr const char* csv_header = "iter,objective,grad_norm,alpha,test_accuracy,flag";

/// Shortest round-trip decimal form, with a ".0" suffix for integral values
/// (so 233.0 prints as "233.0", 24.2 as "24.2").
std::string format_double(double v);

std::string csv_row(const TrajectoryRecord& record);

/// Writes header + one row per record. Refuses an empty record list.
void write_csv(const std::vector<TrajectoryRecord>& records, const std::string& path);

std::vector<TrajectoryRecord> read_csv(const std::string& path);

/// Streaming writer used by the CLI so an interrupted run still leaves a
/// readable CSV prefix. path "-" streams to stdout.
class CsvStream {
  public:
    explicit CsvStream(const std::string& path);
    void append(const TrajectoryRecord& record);
    void close();

  private:
    std::ofstream file_;
    bool to_stdout_ = false;
};

}  // namespace sqn
