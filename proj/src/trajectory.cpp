#include "sqn/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <sstream>

#include "sqn/errors.hpp"

namespace sqn {

const char* to_string(RunFlag flag) {
    switch (flag) {
        case RunFlag::Ok: return "ok";
        case RunFlag::Converged: return "converged";
        case RunFlag::Nonfinite: return "nonfinite";
    }
    return "ok";
}

RunFlag run_flag_from_string(const std::string& s) {
    if (s == "ok") return RunFlag::Ok;
    if (s == "converged") return RunFlag::Converged;
    if (s == "nonfinite") return RunFlag::Nonfinite;
    throw FormatError("unknown run flag '" + s + "'");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[2 + std::numeric_limits<double>::max_digits10 + 16];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string csv_row(const TrajectoryRecord& r) {
    std::string row = std::to_string(r.iter);
    row += ',';
    row += format_double(r.objective);
    row += ',';
    row += format_double(r.grad_norm);
    row += ',';
    row += format_double(r.alpha);
    row += ',';
    if (r.test_accuracy) row += format_double(*r.test_accuracy);
    row += ',';
    row += to_string(r.flag);
    return row;
}

void write_csv(const std::vector<TrajectoryRecord>& records, const std::string& path) {
    if (records.empty()) throw InvalidInputError("write_csv: refusing to write an empty run");
    CsvStream out(path);
    for (const auto& r : records) out.append(r);
    out.close();
}

namespace {

double parse_double_field(const std::string& field, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') {
        throw FormatError(path + ": unparsable numeric field '" + field + "'");
    }
    return v;
}

}  // namespace

std::vector<TrajectoryRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file");
    if (line != csv_header) {
        throw FormatError(path + ": unexpected header '" + line + "'");
    }
    std::vector<TrajectoryRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        if (fields.size() != 6) {
            throw FormatError(path + ": expected 6 fields, got " + std::to_string(fields.size()) +
                              " in line '" + line + "'");
        }
        TrajectoryRecord r;
        r.iter = static_cast<std::uint64_t>(std::stoull(fields[0]));
        r.objective = parse_double_field(fields[1], path);
        r.grad_norm = parse_double_field(fields[2], path);
        r.alpha = parse_double_field(fields[3], path);
        if (!fields[4].empty()) r.test_accuracy = parse_double_field(fields[4], path);
        r.flag = run_flag_from_string(fields[5]);
        records.push_back(r);
    }
    return records;
}

CsvStream::CsvStream(const std::string& path) : to_stdout_(path == "-") {
    if (!to_stdout_) {
        file_.open(path, std::ios::trunc);
        if (!file_) throw IoError("cannot open '" + path + "' for writing");
    }
    std::ostream& out = to_stdout_ ? std::cout : file_;
    out << csv_header << '\n';
}

void CsvStream::append(const TrajectoryRecord& record) {
    std::ostream& out = to_stdout_ ? std::cout : file_;
    out << csv_row(record) << '\n';
    if (!to_stdout_ && !file_) throw IoError("write failure on trajectory CSV");
}

void CsvStream::close() {
    if (to_stdout_) {
        std::cout.flush();
    } else if (file_.is_open()) {
        file_.close();
        if (file_.fail()) throw IoError("close failure on trajectory CSV");
    }
}

}  // namespace sqn
