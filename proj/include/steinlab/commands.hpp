#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace steinlab {

// Subcommand bodies shared by the CLI binary and the tests. Each returns
// the process exit code: 0 success, 2 input error, 3 numerical failure.

struct SolveArgs {
    std::string pair_path;
    std::string method = "doubling";  // or "direct"
    std::string out_path;             // empty -> stdout
};
int run_solve_command(const SolveArgs& args, std::ostream& out, std::ostream& err);

struct BoundsArgs {
    std::string pair_path;
    std::string spectrum_path;
    std::optional<double> jordan_lambda;
    int n = 0;  // jordan input only
    int d = 1;
    bool solve = false;
    std::string out_path;
};
int run_bounds_command(const BoundsArgs& args, std::ostream& out, std::ostream& err);

struct NormalizeArgs {
    std::string pair_path;
    std::string out_path;
};
int run_normalize_command(const NormalizeArgs& args, std::ostream& out, std::ostream& err);

struct EnsembleArgs {
    std::string kind = "generic";
    int n = 8;
    int d = 1;
    double lambda = 0.5;
    int samples = 100;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string format = "csv";
    std::string out_path;
};
int run_ensemble_command(const EnsembleArgs& args, std::ostream& out, std::ostream& err);

struct TableArgs {
    std::string id = "1";
    std::uint64_t seed = 0;
    int samples = 0;  // 0 -> preset count
    int workers = 1;
    std::string format = "csv";
    std::string out_path;
};
int run_table_command(const TableArgs& args, std::ostream& out, std::ostream& err);

struct ColoredArgs {
    std::string pair_path;
    std::string noise = "ar1";
    double param = 0.5;
    double tol = 1e-12;
    bool emit_w = false;
    std::string out_path;
};
int run_colored_command(const ColoredArgs& args, std::ostream& out, std::ostream& err);

}  // namespace steinlab
