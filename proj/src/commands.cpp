#include "steinlab/commands.hpp"

#include <fstream>
#include <iostream>

#include "steinlab/serialize.hpp"

namespace steinlab {

namespace {

void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw input_error("cannot write output file: " + out_path);
    file << text;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int run_solve_command(const SolveArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const InputPair pair = load_pair_file(args.pair_path);
        SteinSolution sol;
        if (args.method == "doubling") {
            sol = solve_stein_sqrt_doubling(pair);
        } else if (args.method == "direct") {
            const ComplexMatrix p = solve_stein_direct(pair);
            Eigen::LLT<ComplexMatrix> llt(p);
            if (llt.info() != Eigen::Success)
                throw numeric_error("direct solution is not positive definite");
            sol.factor_l = llt.matrixL();
            sol.iterations = 0;
            sol.residual_rel = stein_residual(pair, p);
            sol.log_kappa = cond_from_factor(sol.factor_l);
        } else {
            throw input_error("unknown method: " + args.method + " (use direct or doubling)");
        }
        write_output(solution_to_json(sol).dump(2) + "\n", args.out_path, out);
    });
}

int run_bounds_command(const BoundsArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const int inputs = (args.pair_path.empty() ? 0 : 1) +
                           (args.spectrum_path.empty() ? 0 : 1) + (args.jordan_lambda ? 1 : 0);
        if (inputs != 1)
            throw input_error("bounds: provide exactly one of --pair, --spectrum, --jordan");

        BoundReport report;
        std::optional<InputPair> pair;
        if (!args.pair_path.empty()) {
            pair = load_pair_file(args.pair_path);
            report = evaluate_bounds(*pair);
        } else if (!args.spectrum_path.empty()) {
            report = evaluate_bounds(load_spectrum_file(args.spectrum_path), args.d);
        } else {
            if (args.n < 1) throw input_error("bounds: --jordan needs --n >= 1");
            report = evaluate_bounds_jordan(Complex(*args.jordan_lambda, 0.0), args.n);
        }

        nlohmann::json j = bound_report_to_json(report);
        if (args.solve) {
            if (!pair) throw input_error("bounds: --solve needs a --pair input");
            const SteinSolution sol = solve_stein_sqrt_doubling(*pair);
            j["log_kappa"] = sol.log_kappa;
            nlohmann::json gaps;
            for (const auto& [name, value] : report.entries) gaps[name] = sol.log_kappa - value;
            j["gap"] = std::move(gaps);
        }
        write_output(j.dump(2) + "\n", args.out_path, out);
    });
}

int run_normalize_command(const NormalizeArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const InputPair pair = load_pair_file(args.pair_path);
        const InTransform t = to_input_normal(pair);
        nlohmann::json j = transform_to_json(t);
        j["in_residual"] = input_normal_residual({t.a_tilde, t.b_tilde});
        write_output(j.dump(2) + "\n", args.out_path, out);
    });
}

int run_ensemble_command(const EnsembleArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        EnsembleSpec spec;
        spec.kind = ensemble_kind_from_string(args.kind);
        spec.n = args.n;
        spec.d = args.d;
        spec.count = args.samples;
        spec.seed = args.seed;
        spec.jordan_lambda = args.lambda;
        const EnsembleResult res = run_ensemble(spec, args.workers);

        std::string text;
        if (args.format == "json") {
            nlohmann::json j;
            j["kind"] = args.kind;
            j["n"] = spec.n;
            j["d"] = spec.d;
            j["seed"] = spec.seed;
            j["count"] = spec.count;
            j["excluded"] = res.excluded;
            j["failures"] = res.failures;
            j["records"] = nlohmann::json::array();
            for (const SampleRecord& r : res.records) j["records"].push_back(record_to_json(r));
            text = j.dump(2) + "\n";
        } else if (args.format == "csv") {
            std::string csv = "index,log_kappa,bound,rejections,log_kappa_l,residual_rel,iterations\n";
            char buf[256];
            for (const SampleRecord& r : res.records) {
                std::snprintf(buf, sizeof buf, "%d,%.17g,", r.index, r.log_kappa);
                csv += buf;
                if (r.bound_log) {
                    std::snprintf(buf, sizeof buf, "%.17g", *r.bound_log);
                    csv += buf;
                }
                std::snprintf(buf, sizeof buf, ",%d,%.17g,%.17g,%d\n", r.rejections,
                              r.aux.at("log_kappa_l"), r.aux.at("residual_rel"),
                              static_cast<int>(r.aux.at("iterations")));
                csv += buf;
            }
            csv += "# excluded=" + std::to_string(res.excluded) + "\n";
            text = csv;
        } else {
            throw input_error("ensemble: format must be csv or json");
        }
        write_output(text, args.out_path, out);
    });
}

int run_table_command(const TableArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const TableDocument doc = emit_table(args.id, args.seed, args.samples, args.workers,
                                             table_format_from_string(args.format));
        write_output(doc.text, args.out_path, out);
    });
}

int run_colored_command(const ColoredArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const InputPair pair = load_pair_file(args.pair_path);
        NoiseModel noise;
        if (args.noise == "white") {
            noise = NoiseModel::white();
        } else if (args.noise == "ar1") {
            noise = NoiseModel::ar1(args.param);
        } else if (args.noise == "ma1") {
            noise = NoiseModel::ma1(args.param);
        } else {
            throw input_error("colored: noise must be white, ar1 or ma1");
        }

        const ColoredBoundCheck check = colored_condition_bound(pair, noise);
        nlohmann::json j;
        j["noise"] = noise_to_json(noise);
        j["log_kappa_w"] = check.lhs;
        j["log_kappa_p_plus_ratio"] = check.rhs;
        j["log_s_ratio"] = std::log(noise.s_max / noise.s_min);
        j["satisfied"] = check.lhs <= check.rhs + 1e-6;
        if (args.emit_w)
            j["w"] = matrix_to_json(state_covariance_colored(pair, noise, args.tol));
        write_output(j.dump(2) + "\n", args.out_path, out);
    });
}

}  // namespace steinlab
