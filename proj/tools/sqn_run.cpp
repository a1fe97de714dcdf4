#include <exception>
#include <iostream>

#include "sqn/runner.hpp"
#include "sqn/trajectory.hpp"

// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure
// (a run whose final record is flagged nonfinite also exits 3; its CSV is
// still complete and valid).
int main(int argc, char** argv) {
    sqn::RunConfig cfg;
    try {
        cfg = sqn::parse_config(argc, argv);
    } catch (const sqn::HelpRequested& help) {
        std::cout << help.text;
        return 0;
    } catch (const sqn::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        sqn::CsvStream out(cfg.out_path);
        const auto records = sqn::run_experiment(cfg, [&](const sqn::TrajectoryRecord& r) {
            out.append(r);
        });
        out.close();
        if (!records.empty() && records.back().flag == sqn::RunFlag::Nonfinite) {
            std::cerr << "run ended with non-finite values at iteration "
                      << records.back().iter << "\n";
            return 3;
        }
        return 0;
    } catch (const sqn::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const sqn::InvalidInputError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const sqn::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const sqn::NumericalFailureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
