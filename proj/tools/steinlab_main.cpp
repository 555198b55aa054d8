// steinlab: solve discrete Lyapunov (Stein) equations, transform pairs to
// input-normal form, evaluate Grammian condition-number bounds, and run the
// bundled Monte Carlo table experiments.

#include <CLI11.hpp>

#include <iostream>

#include "steinlab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Stein-equation conditioning laboratory"};
    app.require_subcommand(1);

    steinlab::SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "solve P - A P A* = B B* for a pair file");
    solve->add_option("--pair", solve_args.pair_path, "input pair JSON file")->required();
    solve->add_option("--method", solve_args.method, "direct | doubling (default doubling)");
    solve->add_option("--out", solve_args.out_path, "output path (default stdout)");

    steinlab::BoundsArgs bounds_args;
    double jordan_lambda = 0.0;
    CLI::App* bounds = app.add_subcommand("bounds", "evaluate condition-number lower bounds");
    bounds->add_option("--pair", bounds_args.pair_path, "input pair JSON file");
    bounds->add_option("--spectrum", bounds_args.spectrum_path, "spectrum JSON file");
    CLI::Option* jopt = bounds->add_option("--jordan", jordan_lambda, "Jordan block eigenvalue");
    bounds->add_option("--n", bounds_args.n, "dimension for --jordan");
    bounds->add_option("--d", bounds_args.d, "input dimension (default 1)");
    bounds->add_flag("--solve", bounds_args.solve, "also solve and report the gap");
    bounds->add_option("--out", bounds_args.out_path, "output path (default stdout)");

    steinlab::NormalizeArgs normalize_args;
    CLI::App* normalize = app.add_subcommand("normalize", "transform a pair to input-normal form");
    normalize->add_option("--pair", normalize_args.pair_path, "input pair JSON file")->required();
    normalize->add_option("--out", normalize_args.out_path, "output path (default stdout)");

    steinlab::EnsembleArgs ensemble_args;
    CLI::App* ensemble = app.add_subcommand("ensemble", "run an ensemble, export per-sample records");
    ensemble->add_option("--kind", ensemble_args.kind,
                         "generic | normal-diag | companion-random-b | companion-ar | "
                         "ar-observability | jordan");
    ensemble->add_option("--n", ensemble_args.n, "state dimension");
    ensemble->add_option("--d", ensemble_args.d, "input dimension (generic only)");
    ensemble->add_option("--lambda", ensemble_args.lambda, "Jordan eigenvalue");
    ensemble->add_option("--samples", ensemble_args.samples, "sample count");
    ensemble->add_option("--seed", ensemble_args.seed, "random seed");
    ensemble->add_option("--workers", ensemble_args.workers, "worker threads");
    ensemble->add_option("--format", ensemble_args.format, "csv | json");
    ensemble->add_option("--out", ensemble_args.out_path, "output path (default stdout)");

    steinlab::TableArgs table_args;
    CLI::App* table = app.add_subcommand("table", "emit a quantile table preset");
    table->add_option("--id", table_args.id, "1 | 2 | 3 | 4a | 4b | 4c | 5")->required();
    table->add_option("--seed", table_args.seed, "random seed");
    table->add_option("--samples", table_args.samples, "samples per row (0 = preset)");
    table->add_option("--workers", table_args.workers, "worker threads");
    table->add_option("--format", table_args.format, "csv | json | md");
    table->add_option("--out", table_args.out_path, "output path (default stdout)");

    steinlab::ColoredArgs colored_args;
    CLI::App* colored = app.add_subcommand("colored", "state covariance under colored forcing");
    colored->add_option("--pair", colored_args.pair_path, "input pair JSON file")->required();
    colored->add_option("--noise", colored_args.noise, "white | ar1 | ma1");
    colored->add_option("--param", colored_args.param, "noise coefficient");
    colored->add_option("--tol", colored_args.tol, "truncation tolerance");
    colored->add_flag("--emit-w", colored_args.emit_w, "include the covariance matrix");
    colored->add_option("--out", colored_args.out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (solve->parsed()) return steinlab::run_solve_command(solve_args, std::cout, std::cerr);
    if (bounds->parsed()) {
        if (jopt->count() > 0) bounds_args.jordan_lambda = jordan_lambda;
        return steinlab::run_bounds_command(bounds_args, std::cout, std::cerr);
    }
    if (normalize->parsed())
        return steinlab::run_normalize_command(normalize_args, std::cout, std::cerr);
    if (ensemble->parsed())
        return steinlab::run_ensemble_command(ensemble_args, std::cout, std::cerr);
    if (table->parsed()) return steinlab::run_table_command(table_args, std::cout, std::cerr);
    if (colored->parsed()) return steinlab::run_colored_command(colored_args, std::cout, std::cerr);
    return 2;
}
