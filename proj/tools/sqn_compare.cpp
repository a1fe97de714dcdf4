#include <iostream>
#include <string>
#include <vector>

#include "sqn/runner.hpp"

// Summarizes trajectory CSVs side by side and names the best run (highest
// final test accuracy, ties broken by lower final objective).
int main(int argc, char** argv) {
    std::vector<std::string> paths;
    for (int i = 1; i < argc; ++i) paths.emplace_back(argv[i]);
    if (paths.empty() || paths.front() == "--help" || paths.front() == "-h") {
        std::cerr << "usage: sqn_compare <run.csv> [more.csv ...]\n";
        return paths.empty() ? 1 : 0;
    }
    try {
        std::cout << sqn::compare_runs(paths);
        return 0;
    } catch (const sqn::FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 2;
    } catch (const sqn::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
