#include "steinlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "steinlab/bounds.hpp"
#include "steinlab/stein.hpp"

namespace steinlab {

namespace {

std::string fmt_g17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double quantile_at(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    const double pos = 1.0 + (static_cast<double>(n) - 1.0) * q;  // 1-based
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= n) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo - 1];
    return sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1]);
}

const std::vector<std::string>& probe_names() {
    static const std::vector<std::string> names{"q01", "q10", "q25", "q50",
                                                "q75", "q90", "q99"};
    return names;
}

struct RowConfig {
    EnsembleKind kind;
    int n;
    double lambda = 0.0;  // jordan rows only
};

struct TableConfig {
    std::vector<RowConfig> rows;
    bool jordan_layout = false;   // lambda / bound / min columns
    bool diff_values = false;     // quantiles of (ln kappa - bound)
    int default_samples = 2500;
};

TableConfig table_config(const std::string& id) {
    TableConfig cfg;
    const std::vector<int> dims{8, 16, 24};
    if (id == "1") {
        for (int n : dims) cfg.rows.push_back({EnsembleKind::Generic, n});
    } else if (id == "2" || id == "3") {
        for (int n : dims) cfg.rows.push_back({EnsembleKind::NormalDiag, n});
        cfg.diff_values = id == "3";
    } else if (id == "4a") {
        for (int n : dims) cfg.rows.push_back({EnsembleKind::CompanionRandomB, n});
    } else if (id == "4b") {
        for (int n : dims) cfg.rows.push_back({EnsembleKind::CompanionAr, n});
    } else if (id == "4c") {
        for (int n : dims) cfg.rows.push_back({EnsembleKind::ArObservability, n});
    } else if (id == "5") {
        for (double lambda : {0.3, 0.5, 0.8})
            for (int n : dims) cfg.rows.push_back({EnsembleKind::Jordan, n, lambda});
        cfg.jordan_layout = true;
        cfg.default_samples = 1200;
    } else {
        throw input_error("unknown table id: " + id);
    }
    return cfg;
}

}  // namespace

QuantileSummary quantiles(std::vector<double> values, const std::vector<double>& probes) {
    if (values.size() < 2) throw input_error("quantiles: need at least 2 values");
    for (double q : probes)
        if (!(q >= 0.0 && q <= 1.0)) throw input_error("quantiles: probes must lie in [0,1]");
    std::sort(values.begin(), values.end());

    QuantileSummary out;
    out.probes = probes;
    out.values.reserve(probes.size());
    for (double q : probes) out.values.push_back(quantile_at(values, q));
    out.iq_distance = quantile_at(values, 0.75) - quantile_at(values, 0.25);
    out.count = static_cast<int>(values.size());
    return out;
}

EnsembleResult run_ensemble(const EnsembleSpec& spec, int workers) {
    spec.validate();
    const int count = spec.count;
    std::vector<std::optional<SampleRecord>> slots(static_cast<std::size_t>(count));
    std::vector<std::string> errors(static_cast<std::size_t>(count));
    std::atomic<int> next{0};

    auto process = [&](int index) {
        try {
            SampleDraw draw = draw_sample(spec, index);
            SteinSolution sol = solve_stein_sqrt_doubling(draw.pair);
            SampleRecord rec;
            rec.index = index;
            rec.log_kappa = sol.log_kappa;
            rec.rejections = draw.rejections;
            rec.aux["log_kappa_l"] = 0.5 * sol.log_kappa;
            rec.aux["residual_rel"] = sol.residual_rel;
            rec.aux["iterations"] = static_cast<double>(sol.iterations);
            switch (spec.kind) {
                case EnsembleKind::NormalDiag: {
                    std::vector<Complex> diag(static_cast<std::size_t>(spec.n));
                    for (int i = 0; i < spec.n; ++i)
                        diag[static_cast<std::size_t>(i)] = draw.pair.a(i, i);
                    rec.bound_log = normal_bound(Spectrum(std::move(diag)), 1);
                    break;
                }
                case EnsembleKind::CompanionRandomB:
                case EnsembleKind::CompanionAr:
                case EnsembleKind::ArObservability:
                    rec.bound_log = companion_bound(*draw.companion).log_mu_plus;
                    break;
                case EnsembleKind::Jordan:
                    rec.bound_log =
                        jordan_bound(Complex(spec.jordan_lambda, 0.0), spec.n).weak;
                    break;
                case EnsembleKind::Generic:
                    break;
            }
            slots[static_cast<std::size_t>(index)] = std::move(rec);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(index)] = e.what();
        }
    };

    const int pool = std::max(1, workers);
    if (pool == 1) {
        for (int i = 0; i < count; ++i) process(i);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(pool));
        for (int w = 0; w < pool; ++w)
            threads.emplace_back([&] {
                for (;;) {
                    const int i = next.fetch_add(1);
                    if (i >= count) return;
                    process(i);
                }
            });
        for (auto& t : threads) t.join();
    }

    EnsembleResult result;
    result.records.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        if (slots[static_cast<std::size_t>(i)]) {
            result.records.push_back(std::move(*slots[static_cast<std::size_t>(i)]));
        } else {
            ++result.excluded;
            result.failures.push_back("sample " + std::to_string(i) + ": " +
                                      errors[static_cast<std::size_t>(i)]);
        }
    }
    return result;
}

TableFormat table_format_from_string(const std::string& name) {
    if (name == "csv") return TableFormat::Csv;
    if (name == "json") return TableFormat::Json;
    if (name == "md") return TableFormat::Md;
    throw input_error("unknown table format: " + name);
}

namespace {

std::vector<std::string> table_columns(const TableConfig& cfg) {
    std::vector<std::string> cols;
    cols.push_back("n");
    if (cfg.jordan_layout) cols.push_back("lambda");
    for (const std::string& p : probe_names()) cols.push_back(p);
    if (cfg.jordan_layout) {
        cols.push_back("bound");
        cols.push_back("min");
    }
    cols.push_back("count");
    cols.push_back("excluded");
    return cols;
}

std::string render_csv(const TableDocument& doc, const TableConfig& cfg) {
    std::ostringstream out;
    for (std::size_t i = 0; i < doc.columns.size(); ++i)
        out << (i ? "," : "") << doc.columns[i];
    out << "\n";
    for (const TableRow& row : doc.rows) {
        out << row.n;
        if (cfg.jordan_layout) out << "," << fmt_g17(*row.lambda);
        for (double v : row.summary.values) out << "," << fmt_g17(v);
        if (cfg.jordan_layout) {
            out << "," << fmt_g17(*row.summary.extra_bound);
            out << "," << fmt_g17(*row.summary.extra_min);
        }
        out << "," << row.summary.count << "," << row.excluded << "\n";
    }
    out << "# table=" << doc.id << " seed=" << doc.seed << " samples=" << doc.samples_per_row
        << " excluded_total=" << doc.excluded_total << "\n";
    out << "# flags=";
    bool first = true;
    for (const TableRow& row : doc.rows)
        for (const std::string& cell : row.flagged_cells) {
            if (!first) out << ",";
            first = false;
            out << "n" << row.n;
            if (row.lambda) out << "l" << fmt_g6(*row.lambda);
            out << ":" << cell;
        }
    out << "\n";
    out << "# cells flagged above ln(kappa) = " << fmt_g6(kLogKappaTrustCeiling)
        << " exceed the double-precision trust ceiling\n";
    return out.str();
}

std::string render_json(const TableDocument& doc, const TableConfig& cfg) {
    nlohmann::json rows = nlohmann::json::array();
    for (const TableRow& row : doc.rows) {
        nlohmann::json r;
        r["n"] = row.n;
        if (cfg.jordan_layout) {
            r["lambda"] = *row.lambda;
            r["bound"] = *row.summary.extra_bound;
            r["min"] = *row.summary.extra_min;
        }
        for (std::size_t i = 0; i < probe_names().size(); ++i)
            r[probe_names()[i]] = row.summary.values[i];
        r["iq_distance"] = row.summary.iq_distance;
        r["count"] = row.summary.count;
        r["excluded"] = row.excluded;
        r["flags"] = row.flagged_cells;
        rows.push_back(std::move(r));
    }
    nlohmann::json j;
    j["table"] = doc.id;
    j["seed"] = doc.seed;
    j["samples"] = doc.samples_per_row;
    j["excluded_total"] = doc.excluded_total;
    j["trust_ceiling"] = kLogKappaTrustCeiling;
    j["columns"] = doc.columns;
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string render_md(const TableDocument& doc, const TableConfig& cfg) {
    std::ostringstream out;
    out << "| ";
    for (const std::string& c : doc.columns) out << c << " | ";
    out << "\n|";
    for (std::size_t i = 0; i < doc.columns.size(); ++i) out << "---|";
    out << "\n";
    for (const TableRow& row : doc.rows) {
        out << "| " << row.n << " | ";
        if (cfg.jordan_layout) out << fmt_g6(*row.lambda) << " | ";
        for (std::size_t i = 0; i < row.summary.values.size(); ++i) {
            out << fmt_g6(row.summary.values[i]);
            const std::string& name = probe_names()[i];
            if (std::find(row.flagged_cells.begin(), row.flagged_cells.end(), name) !=
                row.flagged_cells.end())
                out << "*";
            out << " | ";
        }
        if (cfg.jordan_layout) {
            out << fmt_g6(*row.summary.extra_bound) << " | ";
            out << fmt_g6(*row.summary.extra_min);
            if (std::find(row.flagged_cells.begin(), row.flagged_cells.end(), "min") !=
                row.flagged_cells.end())
                out << "*";
            out << " | ";
        }
        out << row.summary.count << " | " << row.excluded << " |\n";
    }
    out << "\n";
    out << "seed=" << doc.seed << " samples=" << doc.samples_per_row
        << " excluded_total=" << doc.excluded_total << "\n";
    out << "\\* beyond the double-precision trust ceiling (ln kappa > "
        << fmt_g6(kLogKappaTrustCeiling) << ")\n";
    return out.str();
}

}  // namespace

TableDocument emit_table(const std::string& table_id, std::uint64_t seed, int samples,
                         int workers, TableFormat format) {
    const TableConfig cfg = table_config(table_id);
    const int count = samples > 0 ? samples : cfg.default_samples;

    TableDocument doc;
    doc.id = table_id;
    doc.seed = seed;
    doc.samples_per_row = count;
    doc.columns = table_columns(cfg);

    for (const RowConfig& rc : cfg.rows) {
        EnsembleSpec spec;
        spec.kind = rc.kind;
        spec.n = rc.n;
        spec.d = 1;
        spec.count = count;
        spec.seed = seed;
        spec.jordan_lambda = rc.lambda;
        EnsembleResult res = run_ensemble(spec, workers);
        if (static_cast<int>(res.records.size()) < 2)
            throw numeric_error("table " + table_id + ": too many solver failures at n = " +
                                std::to_string(rc.n));

        std::vector<double> values;
        values.reserve(res.records.size());
        double min_kappa = res.records.front().log_kappa;
        for (const SampleRecord& rec : res.records) {
            min_kappa = std::min(min_kappa, rec.log_kappa);
            values.push_back(cfg.diff_values ? rec.log_kappa - rec.bound_log.value()
                                             : rec.log_kappa);
        }

        TableRow row;
        row.n = rc.n;
        row.summary = quantiles(std::move(values), default_probes());
        row.summary.n = rc.n;
        row.excluded = res.excluded;
        if (cfg.jordan_layout) {
            row.lambda = rc.lambda;
            row.summary.extra_min = min_kappa;
            row.summary.extra_bound = jordan_bound(Complex(rc.lambda, 0.0), rc.n).weak;
        }
        for (std::size_t i = 0; i < row.summary.values.size(); ++i)
            if (row.summary.values[i] > kLogKappaTrustCeiling)
                row.flagged_cells.push_back(probe_names()[i]);
        if (row.summary.extra_min && *row.summary.extra_min > kLogKappaTrustCeiling)
            row.flagged_cells.push_back("min");

        doc.excluded_total += res.excluded;
        doc.rows.push_back(std::move(row));
    }

    switch (format) {
        case TableFormat::Csv:
            doc.format_name = "csv";
            doc.text = render_csv(doc, cfg);
            break;
        case TableFormat::Json:
            doc.format_name = "json";
            doc.text = render_json(doc, cfg);
            break;
        case TableFormat::Md:
            doc.format_name = "md";
            doc.text = render_md(doc, cfg);
            break;
    }
    return doc;
}

std::vector<TableRow> parse_table_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> header;
    std::vector<TableRow> rows;

    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        parts.push_back(cur);
        return parts;
    };

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = split(line);
            continue;
        }
        const std::vector<std::string> parts = split(line);
        if (parts.size() != header.size())
            throw input_error("csv table: row width does not match header");
        TableRow row;
        row.summary.probes = default_probes();
        for (std::size_t i = 0; i < header.size(); ++i) {
            const std::string& col = header[i];
            const double v = std::strtod(parts[i].c_str(), nullptr);
            if (col == "n") {
                row.n = static_cast<int>(v);
                row.summary.n = row.n;
            } else if (col == "lambda") {
                row.lambda = v;
            } else if (col == "bound") {
                row.summary.extra_bound = v;
            } else if (col == "min") {
                row.summary.extra_min = v;
            } else if (col == "count") {
                row.summary.count = static_cast<int>(v);
            } else if (col == "excluded") {
                row.excluded = static_cast<int>(v);
            } else {
                row.summary.values.push_back(v);
            }
        }
        if (row.summary.values.size() >= 5)
            row.summary.iq_distance = row.summary.values[4] - row.summary.values[2];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace steinlab
