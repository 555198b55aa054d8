#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "steinlab/commands.hpp"
#include "steinlab/lab.hpp"
#include "steinlab/serialize.hpp"
#include "test_support.hpp"

using namespace steinlab;
using namespace steinlab::testing;

TEST_CASE("quantiles: order-statistic interpolation") {
    const QuantileSummary q = quantiles({4, 0, 3, 1, 2}, {0.25, 0.5});
    CHECK(q.values[0] == doctest::Approx(1.0));
    CHECK(q.values[1] == doctest::Approx(2.0));
    CHECK(q.count == 5);
    CHECK(q.iq_distance == doctest::Approx(2.0));  // 3 - 1

    CHECK_THROWS_AS(quantiles({1.0}, {0.5}), input_error);
    CHECK_THROWS_AS(quantiles({1.0, 2.0}, {1.5}), input_error);
}

TEST_CASE("quantiles of standard normal draws") {
    RandomStream s(5150, 0, 0);
    std::vector<double> draws(2500);
    for (double& d : draws) d = s.next_gaussian();
    const QuantileSummary q = quantiles(std::move(draws), default_probes());
    CHECK(std::abs(q.values[3]) < 0.08);  // 3 standard errors of the sample median
    for (std::size_t i = 1; i < q.values.size(); ++i) CHECK(q.values[i] >= q.values[i - 1]);
    CHECK(q.iq_distance == doctest::Approx(q.values[4] - q.values[2]).epsilon(1e-12));
}

TEST_CASE("run_ensemble is deterministic across worker counts") {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::Generic;
    spec.n = 6;
    spec.d = 1;
    spec.count = 40;
    spec.seed = 777;

    const EnsembleResult serial = run_ensemble(spec, 1);
    const EnsembleResult quad = run_ensemble(spec, 4);
    REQUIRE(serial.records.size() == quad.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
        CHECK(serial.records[i].index == quad.records[i].index);
        CHECK(serial.records[i].log_kappa == quad.records[i].log_kappa);
        CHECK(serial.records[i].rejections == quad.records[i].rejections);
    }
    CHECK(serial.excluded == 0);
}

TEST_CASE("run_ensemble attaches the applicable bound") {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::Jordan;
    spec.n = 8;
    spec.d = 1;
    spec.count = 12;
    spec.seed = 31;
    spec.jordan_lambda = 0.5;
    const EnsembleResult res = run_ensemble(spec, 2);
    REQUIRE(res.records.size() == 12);
    for (const SampleRecord& rec : res.records) {
        REQUIRE(rec.bound_log.has_value());
        CHECK(rec.log_kappa >= *rec.bound_log - 1e-6 * std::max(1.0, std::abs(*rec.bound_log)));
        CHECK(rec.aux.at("log_kappa_l") == doctest::Approx(0.5 * rec.log_kappa));
    }

    spec.kind = EnsembleKind::Generic;
    spec.jordan_lambda = 0.5;
    const EnsembleResult gen = run_ensemble(spec, 1);
    for (const SampleRecord& rec : gen.records) CHECK_FALSE(rec.bound_log.has_value());
}

TEST_CASE("emit_table determinism and layout") {
    const TableDocument t1a = emit_table("1", 99, 30, 1, TableFormat::Csv);
    const TableDocument t1b = emit_table("1", 99, 30, 4, TableFormat::Csv);
    const TableDocument t1c = emit_table("1", 99, 30, 8, TableFormat::Csv);
    CHECK(t1a.text == t1b.text);
    CHECK(t1a.text == t1c.text);
    REQUIRE(t1a.rows.size() == 3);
    CHECK(t1a.rows[0].n == 8);
    CHECK(t1a.rows[2].n == 24);

    const TableDocument again = emit_table("1", 99, 30, 2, TableFormat::Csv);
    CHECK(again.text == t1a.text);

    CHECK_THROWS_AS(emit_table("9", 1, 10, 1, TableFormat::Csv), input_error);
}

TEST_CASE("csv tables round trip") {
    const TableDocument doc = emit_table("5", 7, 25, 2, TableFormat::Csv);
    REQUIRE(doc.rows.size() == 9);
    const std::vector<TableRow> parsed = parse_table_csv(doc.text);
    REQUIRE(parsed.size() == doc.rows.size());
    for (std::size_t r = 0; r < parsed.size(); ++r) {
        CHECK(parsed[r].n == doc.rows[r].n);
        CHECK(*parsed[r].lambda == *doc.rows[r].lambda);
        CHECK(*parsed[r].summary.extra_bound == *doc.rows[r].summary.extra_bound);
        CHECK(*parsed[r].summary.extra_min == *doc.rows[r].summary.extra_min);
        CHECK(parsed[r].summary.count == doc.rows[r].summary.count);
        CHECK(parsed[r].excluded == doc.rows[r].excluded);
        REQUIRE(parsed[r].summary.values.size() == doc.rows[r].summary.values.size());
        for (std::size_t i = 0; i < parsed[r].summary.values.size(); ++i)
            CHECK(parsed[r].summary.values[i] == doc.rows[r].summary.values[i]);
        CHECK(parsed[r].summary.iq_distance ==
              doctest::Approx(doc.rows[r].summary.iq_distance).epsilon(1e-12));
    }
}

TEST_CASE("table cells beyond the trust ceiling are flagged") {
    // Jordan lambda = 0.8 at n = 24 pushes the upper quantiles past 69.
    const TableDocument doc = emit_table("5", 13, 20, 2, TableFormat::Csv);
    const TableRow& row = doc.rows.back();  // n = 24, lambda = 0.8
    REQUIRE(row.n == 24);
    REQUIRE(*row.lambda == 0.8);
    CHECK(!row.flagged_cells.empty());

    const TableDocument md = emit_table("5", 13, 20, 2, TableFormat::Md);
    CHECK(md.text.find('*') != std::string::npos);
}

TEST_CASE("table 3 reports quantiles of the bound gap") {
    const TableDocument t2 = emit_table("2", 5, 40, 2, TableFormat::Csv);
    const TableDocument t3 = emit_table("3", 5, 40, 2, TableFormat::Csv);
    for (std::size_t r = 0; r < 3; ++r) {
        // Gap quantiles sit far below the raw ln kappa quantiles.
        CHECK(t3.rows[r].summary.values[3] < t2.rows[r].summary.values[3]);
        CHECK(t3.rows[r].summary.values[3] > 0.0);
    }
}

TEST_CASE("json and md table formats render") {
    const TableDocument json_doc = emit_table("2", 3, 16, 2, TableFormat::Json);
    const nlohmann::json parsed = nlohmann::json::parse(json_doc.text);
    CHECK(parsed.at("table") == "2");
    CHECK(parsed.at("rows").size() == 3);
    CHECK(parsed.at("rows")[0].contains("q50"));

    const TableDocument md_doc = emit_table("2", 3, 16, 2, TableFormat::Md);
    CHECK(md_doc.text.find("| n |") != std::string::npos);
}

TEST_CASE("matrix json round trip and validation") {
    const InputPair pair = random_cs_pair(4, 2, 5005);
    const nlohmann::json j = pair_to_json(pair);
    const InputPair back = pair_from_json(j);
    CHECK(back.a == pair.a);
    CHECK(back.b == pair.b);

    nlohmann::json bad = j;
    bad["a"]["entries"].erase(0);
    CHECK_THROWS_AS(pair_from_json(bad), input_error);

    const Spectrum s({Complex(0.5, 0.1), Complex(-0.2, 0)});
    const Spectrum s2 = spectrum_from_json(spectrum_to_json(s));
    CHECK(s2.eigenvalues() == s.eigenvalues());
}

TEST_CASE("solve command on the scalar pair") {
    InputPair scalar;
    scalar.a = ComplexMatrix::Constant(1, 1, Complex(0.5, 0));
    scalar.b = ComplexMatrix::Ones(1, 1);
    const std::string path = "/tmp/steinlab_test_scalar.json";
    {
        std::ofstream out(path);
        out << pair_to_json(scalar).dump();
    }
    SolveArgs args;
    args.pair_path = path;
    std::ostringstream out, err;
    REQUIRE(run_solve_command(args, out, err) == 0);
    const nlohmann::json sol = nlohmann::json::parse(out.str());
    CHECK(std::abs(sol.at("log_kappa").get<double>()) < 1e-12);
    CHECK(sol.at("residual_rel").get<double>() <= 1e-14);
}

TEST_CASE("solve and bounds commands: exit codes and output") {
    const InputPair pair = random_cs_pair(6, 1, 606);
    const std::string path = "/tmp/steinlab_test_pair.json";
    {
        std::ofstream out(path);
        out << pair_to_json(pair).dump();
    }

    std::ostringstream out, err;
    SolveArgs solve;
    solve.pair_path = path;
    CHECK(run_solve_command(solve, out, err) == 0);
    const nlohmann::json sol = nlohmann::json::parse(out.str());
    CHECK(sol.contains("log_kappa"));
    CHECK(sol.at("residual_rel").get<double>() < 1e-10);

    std::ostringstream out_direct;
    solve.method = "direct";
    CHECK(run_solve_command(solve, out_direct, err) == 0);
    const nlohmann::json sol2 = nlohmann::json::parse(out_direct.str());
    CHECK(std::abs(sol2.at("log_kappa").get<double>() - sol.at("log_kappa").get<double>()) < 1e-6);

    SolveArgs missing;
    missing.pair_path = "/tmp/steinlab_no_such_file.json";
    std::ostringstream sink;
    CHECK(run_solve_command(missing, sink, err) == 2);

    // Unstable pair: numerical failure code.
    InputPair unstable;
    unstable.a = ComplexMatrix::Identity(2, 2);
    unstable.b = ComplexMatrix::Ones(2, 1);
    const std::string bad_path = "/tmp/steinlab_test_unstable.json";
    {
        std::ofstream o(bad_path);
        o << pair_to_json(unstable).dump();
    }
    SolveArgs bad;
    bad.pair_path = bad_path;
    CHECK(run_solve_command(bad, sink, err) == 3);

    BoundsArgs bounds;
    bounds.pair_path = path;
    bounds.solve = true;
    std::ostringstream bounds_out;
    CHECK(run_bounds_command(bounds, bounds_out, err) == 0);
    const nlohmann::json report = nlohmann::json::parse(bounds_out.str());
    CHECK(report.contains("log_kappa"));
    CHECK(report.contains("applicable"));
    const double log_kappa = report.at("log_kappa").get<double>();
    for (const auto& name : report.at("applicable")) {
        const double v = report.at(name.get<std::string>()).get<double>();
        CHECK(log_kappa >= v - 1e-6 * std::max(1.0, std::abs(v)));
    }

    BoundsArgs jordan;
    jordan.jordan_lambda = 0.5;
    jordan.n = 16;
    std::ostringstream jordan_out;
    CHECK(run_bounds_command(jordan, jordan_out, err) == 0);
    const nlohmann::json jr = nlohmann::json::parse(jordan_out.str());
    CHECK(jr.at("jordan-weak").get<double>() == doctest::Approx(13.2492).epsilon(1e-4));

    BoundsArgs conflicting;
    conflicting.pair_path = path;
    conflicting.jordan_lambda = 0.5;
    CHECK(run_bounds_command(conflicting, sink, err) == 2);
}

TEST_CASE("spectrum bounds command applies the companion family") {
    const std::string path = "/tmp/steinlab_test_spectrum.json";
    {
        std::ofstream out(path);
        out << spectrum_to_json(Spectrum({Complex(0.5, 0), Complex(0.5, 0)})).dump();
    }
    BoundsArgs args;
    args.spectrum_path = path;
    std::ostringstream out, err;
    CHECK(run_bounds_command(args, out, err) == 0);
    const nlohmann::json j = nlohmann::json::parse(out.str());
    CHECK(j.at("normal-d1").get<double>() == doctest::Approx(std::log(4.0)).epsilon(1e-10));
}

TEST_CASE("normalize, ensemble, table and colored commands run end to end") {
    const InputPair pair = random_cs_pair(5, 1, 909);
    const std::string path = "/tmp/steinlab_test_pair2.json";
    {
        std::ofstream out(path);
        out << pair_to_json(pair).dump();
    }
    std::ostringstream out, err;

    NormalizeArgs norm;
    norm.pair_path = path;
    CHECK(run_normalize_command(norm, out, err) == 0);
    CHECK(nlohmann::json::parse(out.str()).at("in_residual").get<double>() < 1e-8 * 5);

    EnsembleArgs ens;
    ens.kind = "normal-diag";
    ens.n = 6;
    ens.samples = 10;
    ens.seed = 4;
    ens.workers = 2;
    ens.format = "csv";
    std::ostringstream ens_out;
    CHECK(run_ensemble_command(ens, ens_out, err) == 0);
    CHECK(ens_out.str().find("index,log_kappa") == 0);

    TableArgs table;
    table.id = "4b";
    table.samples = 8;
    table.workers = 2;
    table.format = "md";
    std::ostringstream table_out;
    CHECK(run_table_command(table, table_out, err) == 0);
    CHECK(table_out.str().find("| n |") != std::string::npos);

    ColoredArgs colored;
    colored.pair_path = path;
    colored.noise = "ar1";
    colored.param = 0.5;
    std::ostringstream colored_out;
    CHECK(run_colored_command(colored, colored_out, err) == 0);
    const nlohmann::json cj = nlohmann::json::parse(colored_out.str());
    CHECK(cj.at("satisfied").get<bool>());
    CHECK(cj.at("log_s_ratio").get<double>() == doctest::Approx(std::log(9.0)).epsilon(1e-12));
}
