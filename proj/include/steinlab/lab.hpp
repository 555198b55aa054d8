#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steinlab/ensembles.hpp"

namespace steinlab {

/// Quantile statistics of one ensemble run, on the natural-log scale.
struct QuantileSummary {
    int n = 0;
    std::vector<double> probes;  ///< e.g. {0.01, 0.10, 0.25, 0.50, 0.75, 0.90, 0.99}
    std::vector<double> values;  ///< non-decreasing, one per probe
    double iq_distance = 0.0;    ///< value(0.75) - value(0.25)
    int count = 0;
    std::optional<double> extra_min;    ///< smallest observed value (table 5 layout)
    std::optional<double> extra_bound;  ///< deterministic bound column (table 5 layout)
};

inline const std::vector<double>& default_probes() {
    static const std::vector<double> p{0.01, 0.10, 0.25, 0.50, 0.75, 0.90, 0.99};
    return p;
}

/// Order-statistic quantiles with linear interpolation: probe q maps to
/// position 1 + (N-1) q among the sorted values. Requires >= 2 values.
QuantileSummary quantiles(std::vector<double> values, const std::vector<double>& probes);

struct EnsembleResult {
    std::vector<SampleRecord> records;  ///< successful samples, ordered by index
    int excluded = 0;                   ///< solver failures, reported not resampled
    std::vector<std::string> failures;  ///< one message per excluded sample
};

/// Run `spec.count` samples across a worker pool. Per-sample streams are
/// keyed by (seed, spec fields, index), so the result is bitwise identical
/// for any worker count. Each record carries ln kappa(P) from the
/// square-root solver plus the ensemble's analytic bound where one applies.
EnsembleResult run_ensemble(const EnsembleSpec& spec, int workers = 1);

enum class TableFormat { Csv, Json, Md };
TableFormat table_format_from_string(const std::string& name);

struct TableRow {
    int n = 0;
    std::optional<double> lambda;  ///< jordan tables only
    QuantileSummary summary;
    int excluded = 0;
    std::vector<std::string> flagged_cells;  ///< probe names with value beyond trust ceiling
};

struct TableDocument {
    std::string id;
    std::vector<std::string> columns;
    std::vector<TableRow> rows;
    std::uint64_t seed = 0;
    int samples_per_row = 0;
    int excluded_total = 0;
    std::string format_name;
    std::string text;  ///< rendered document (csv/json/md)
};

/// Valid ids: 1, 2, 3, 4a, 4b, 4c, 5. A zero `samples` selects the preset
/// count (2500; 1200 for table 5). Output is deterministic in (id, seed,
/// samples) and independent of the worker count.
TableDocument emit_table(const std::string& table_id, std::uint64_t seed, int samples,
                         int workers, TableFormat format);

/// Parse a CSV table document back into rows (round-trip check support).
std::vector<TableRow> parse_table_csv(const std::string& text);

}  // namespace steinlab
