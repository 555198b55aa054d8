// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Runs the full-scale table experiments, so expect a few
// minutes of wall time.

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "steinlab/bounds.hpp"
#include "steinlab/colored.hpp"
#include "steinlab/ensembles.hpp"
#include "steinlab/lab.hpp"
#include "steinlab/normal_form.hpp"
#include "steinlab/stein.hpp"

using namespace steinlab;

namespace {

constexpr std::uint64_t kSeed = 20260808ULL;
int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int id, bool pass, const std::string& what, const std::string& detail,
            double seconds) {
    if (!pass) ++failures;
    std::printf("[%2d] %s  %-28s %s (%.1f s)\n", id, pass ? "PASS" : "FAIL", what.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

InputPair seeded_pair(int n, int d, std::uint64_t index) {
    RandomStream stream(kSeed, 0xACCE97ULL, index);
    return sample_generic(n, d, stream).pair;
}

InputPair seeded_symmetric_pair(int n, std::uint64_t index) {
    RandomStream s(kSeed, 0x535953ULL, index);
    RealMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = s.next_gaussian();
    RealMatrix sym = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym);
    const double radius =
        std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
    sym *= 0.85 / radius;
    RealMatrix b(n, 1);
    for (int i = 0; i < n; ++i) b(i, 0) = s.next_gaussian();
    return {sym.cast<Complex>(), b.cast<Complex>()};
}

// --- criterion bodies -------------------------------------------------

void criterion_1_oracle_equivalence() {
    Timer timer;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int n = 1 + i % 8;
        const int d = n == 1 ? 1 : 1 + i % 2;
        const InputPair pair = seeded_pair(n, d, 1000 + static_cast<std::uint64_t>(i));
        const ComplexMatrix p_direct = solve_stein_direct(pair);
        const SteinSolution sol = solve_stein_sqrt_doubling(pair);
        const ComplexMatrix p_doubling = sol.factor_l * sol.factor_l.adjoint();
        worst = std::max(worst, (p_doubling - p_direct).norm() / p_direct.norm());
    }
    const double elapsed = timer.seconds();
    report(1, worst <= 1e-8 && elapsed < 10.0, "oracle equivalence",
           fmt("max rel err %.2e over 200 pairs", worst), elapsed);
}

void criterion_2_residuals() {
    Timer timer;
    const int dims[] = {4, 8, 16, 24, 32};
    int qualifying = 0;
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const int n = dims[i % 5];
        const InputPair pair = seeded_pair(n, 1, 2000 + static_cast<std::uint64_t>(i));
        const SteinSolution sol = solve_stein_sqrt_doubling(pair);
        const double radius = Spectrum::from_matrix(pair.a).spectral_radius();
        if (sol.log_kappa <= 2.0 * std::log(1e7) && radius <= 0.95) {
            ++qualifying;
            worst = std::max(worst, sol.residual_rel);
        }
    }
    report(2, worst <= 1e-10 && qualifying >= 150, "residual suite",
           fmt("max residual %.2e on %d/500 qualifying cases", worst, qualifying),
           timer.seconds());
}

void criterion_3_input_normal_identity() {
    Timer timer;
    int done = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; done < 200 && i < 1200; ++i) {
        const int n = 2 + static_cast<int>(i % 15);
        const InputPair pair = seeded_pair(n, 1, 3000 + i);
        const SteinSolution sol = solve_stein_sqrt_doubling(pair);
        if (sol.log_kappa > 27.0) continue;
        ++done;
        const InTransform t = to_input_normal(pair);
        const double defect = input_normal_residual({t.a_tilde, t.b_tilde}) / n;
        worst = std::max(worst, defect);
    }
    report(3, worst <= 1e-8 && done == 200, "input-normal identity",
           fmt("max defect/n %.2e on %d pairs", worst, done), timer.seconds());
}

const TableDocument& table_doc(const std::string& id, int samples) {
    static std::map<std::string, TableDocument> cache;
    auto it = cache.find(id);
    if (it == cache.end())
        it = cache.emplace(id, emit_table(id, kSeed, samples, 2, TableFormat::Csv)).first;
    return it->second;
}

void criterion_4_table1() {
    Timer timer;
    const TableDocument& doc = table_doc("1", 2500);
    const double want_median[] = {11.3, 20.3, 28.7};
    const double want_iq[] = {3.8, 4.3, 4.4};
    bool pass = true;
    std::string detail;
    for (int r = 0; r < 3; ++r) {
        const double med = doc.rows[r].summary.values[3];
        const double iq = doc.rows[r].summary.iq_distance;
        pass = pass && std::abs(med - want_median[r]) <= 1.0 && std::abs(iq - want_iq[r]) <= 1.0;
        detail += fmt("n=%d med %.2f iq %.2f; ", doc.rows[r].n, med, iq);
    }
    // Derived headline statistics at n = 24.
    const double kappa_root = std::exp(doc.rows[2].summary.values[3] / 24.0);
    const double factor_root = std::exp(doc.rows[2].summary.values[3] / 2.0 / 24.0);
    pass = pass && std::abs(kappa_root - 3.3) <= 0.3 && std::abs(factor_root - 1.8) <= 0.3;
    detail += fmt("kappa^{1/n} %.2f, kappaL^{1/n} %.2f", kappa_root, factor_root);
    report(4, pass, "table 1 (generic)", detail, timer.seconds());
}

void criterion_5_table2() {
    Timer timer;
    const TableDocument& doc = table_doc("2", 2500);
    const double want_median[] = {12.4, 21.3, 29.8};
    bool pass = true;
    std::string detail;
    for (int r = 0; r < 3; ++r) {
        const double med = doc.rows[r].summary.values[3];
        pass = pass && std::abs(med - want_median[r]) <= 1.0;
        detail += fmt("n=%d med %.2f; ", doc.rows[r].n, med);
    }
    report(5, pass, "table 2 (normal spectra)", detail, timer.seconds());
}

void criterion_6_table3() {
    Timer timer;
    const double want_median[] = {4.83, 5.86, 6.27};
    const int dims[] = {8, 16, 24};
    bool pass = true;
    int violations = 0;
    std::string detail;
    for (int r = 0; r < 3; ++r) {
        EnsembleSpec spec;
        spec.kind = EnsembleKind::NormalDiag;
        spec.n = dims[r];
        spec.count = 2500;
        spec.seed = kSeed;
        const EnsembleResult res = run_ensemble(spec, 2);
        std::vector<double> gaps;
        for (const SampleRecord& rec : res.records) {
            const double bound = rec.bound_log.value();
            gaps.push_back(rec.log_kappa - bound);
            if (rec.log_kappa < bound - 1e-6 * std::max(1.0, std::abs(bound))) ++violations;
        }
        const double med = quantiles(std::move(gaps), {0.5}).values[0];
        pass = pass && std::abs(med - want_median[r]) <= 1.0 && res.excluded == 0;
        detail += fmt("n=%d med %.2f; ", dims[r], med);
    }
    pass = pass && violations == 0;
    detail += fmt("bound violations %d", violations);
    report(6, pass, "table 3 (normal bound gap)", detail, timer.seconds());
}

void criterion_7_table4() {
    Timer timer;
    bool pass = true;
    std::string detail;

    const double want_4a[] = {8.68, 14.6, 19.3};
    const double want_4b[] = {3.59, 5.08, 5.99};
    const TableDocument& t4a = table_doc("4a", 2500);
    const TableDocument& t4b = table_doc("4b", 2500);
    const TableDocument& t4c = table_doc("4c", 2500);
    for (int r = 0; r < 3; ++r) {
        pass = pass && std::abs(t4a.rows[r].summary.values[3] - want_4a[r]) <= 1.5;
        pass = pass && std::abs(t4b.rows[r].summary.values[3] - want_4b[r]) <= 1.5;
    }
    detail += fmt("4a med %.2f/%.2f/%.2f 4b med %.2f/%.2f/%.2f ",
                  t4a.rows[0].summary.values[3], t4a.rows[1].summary.values[3],
                  t4a.rows[2].summary.values[3], t4b.rows[0].summary.values[3],
                  t4b.rows[1].summary.values[3], t4b.rows[2].summary.values[3]);

    // 4c: n = 8 asserted tightly; the larger rows sit beyond the double
    // precision ceiling and are only required to carry accuracy flags.
    const double med8 = t4c.rows[0].summary.values[3];
    pass = pass && std::abs(med8 - 35.1) <= 1.5;
    for (int r = 1; r < 3; ++r) {
        const TableRow& row = t4c.rows[r];
        const bool flagged =
            std::find(row.flagged_cells.begin(), row.flagged_cells.end(), "q50") !=
            row.flagged_cells.end();
        pass = pass && flagged && row.summary.values[3] > kLogKappaTrustCeiling;
    }
    detail += fmt("4c med %.2f/%.1f*/%.1f*", med8, t4c.rows[1].summary.values[3],
                  t4c.rows[2].summary.values[3]);
    report(7, pass, "tables 4a/4b/4c (companion)", detail, timer.seconds());
}

void criterion_8_table5() {
    Timer timer;
    const TableDocument& doc = table_doc("5", 1200);
    // Paper layout: rows n in {8,16,24} within lambda in {0.3, 0.5, 0.8}.
    const double paper_bound[] = {-1.17, 3.16, 8.05, 3.55, 13.2, 23.5, 16.4, 40.7, 65.7};
    const double paper_median[] = {11.6, 23.7, 36.3, 14.0, 31.2, 47.6, 23.9, 51.8, 80.7};
    bool pass = true;
    std::string detail;
    for (int r = 0; r < 9; ++r) {
        const TableRow& row = doc.rows[r];
        const bool excluded_cell = r == 0;  // (lambda=0.3, n=8), documented exclusion
        const double bound = *row.summary.extra_bound;
        const double min_v = *row.summary.extra_min;
        const double med = row.summary.values[3];
        if (!excluded_cell) {
            pass = pass && std::abs(bound - paper_bound[r]) <= 0.1;
            pass = pass && min_v >= bound;
            pass = pass && std::abs(med - paper_median[r]) <= 2.0;
        }
        detail += fmt("%s%.1f", r ? " " : "", med);
    }
    detail = "medians " + detail +
             fmt("; min-vs-bound worst margin %.2f",
                 [&doc] {
                     double worst = 1e300;
                     for (const TableRow& row : doc.rows)
                         worst = std::min(worst,
                                          *row.summary.extra_min - *row.summary.extra_bound);
                     return worst;
                 }());
    report(8, pass, "table 5 (Jordan blocks)", detail, timer.seconds());
}

void criterion_9_companion_svd() {
    Timer timer;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + trial % 22;
        RandomStream s(kSeed, 0xC03FULL, static_cast<std::uint64_t>(trial));
        CompanionSpec spec;
        spec.c0 = Complex(0.8 * s.next_gaussian(), 0.8 * s.next_gaussian());
        spec.c = ComplexVector(n - 1);
        for (int i = 0; i + 1 < n; ++i)
            spec.c(i) = Complex(0.8 * s.next_gaussian(), 0.8 * s.next_gaussian());
        if (trial % 3 == 0) {
            spec.gamma = 1;
            spec.p = 2 + static_cast<int>(s.next_u64() % static_cast<std::uint64_t>(n - 2));
        }
        const CompanionSingularValues predicted = companion_singular_values(spec);
        Eigen::JacobiSVD<ComplexMatrix> svd(build_companion(spec));
        std::vector<double> want = predicted.singular_values;
        std::sort(want.begin(), want.end(), std::greater<double>());
        const double scale = std::max(1.0, want.front());
        for (std::size_t i = 0; i < want.size(); ++i)
            worst = std::max(worst, std::abs(want[i] - svd.singularValues()(
                                                           static_cast<Eigen::Index>(i))) /
                                        scale);
    }
    report(9, worst <= 1e-10, "companion singular values",
           fmt("max deviation %.2e over 100 specs", worst), timer.seconds());
}

void criterion_10_bilinear() {
    Timer timer;
    const Complex ws[] = {Complex(0, 0),   Complex(0.3, 0),  Complex(-0.3, 0),
                          Complex(0, 0.7), Complex(0, -0.7), Complex(0.5, 0.4)};
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const InputPair pair = seeded_pair(8, 1, 4000 + static_cast<std::uint64_t>(i));
        const ComplexMatrix p = solve_stein_direct(pair);
        for (const Complex& w : ws) {
            const ComplexMatrix p_mapped = solve_stein_direct(bilinear_transform(pair, w));
            worst = std::max(worst, (p_mapped - p).norm() / p.norm());
        }
    }
    report(10, worst <= 1e-8, "bilinear invariance",
           fmt("max rel drift %.2e over 50 pairs x 6 maps", worst), timer.seconds());
}

void criterion_11_power_identity() {
    Timer timer;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int n = 2 + i % 15;
        const InputPair pair = seeded_pair(n, 1, 5000 + static_cast<std::uint64_t>(i));
        const InTransform t = to_input_normal(pair);
        worst = std::max(worst, verify_power_identity({t.a_tilde, t.b_tilde}));
    }
    report(11, worst <= 1e-6, "power identity",
           fmt("max |sigma1(A^k) - 1| = %.2e over 50 pairs", worst), timer.seconds());
}

void criterion_12_adi_penzl() {
    Timer timer;
    int violations = 0;
    double worst_gap = 1e300;
    for (int i = 0; i < 50; ++i) {
        const InputPair pair = seeded_symmetric_pair(8, static_cast<std::uint64_t>(i));
        const ContinuousPair cp = cayley(pair);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(cp.a);
        const double lo = es.eigenvalues().cwiseAbs().minCoeff();
        const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
        for (int k = 1; k <= 3; ++k) {
            const DecayCheck check = adi_decay_check(pair, k, penzl_shifts(lo, hi, k));
            const double penzl = std::exp(penzl_bound(hi / lo, k));
            if (check.lhs > penzl + 1e-12) ++violations;
            if (check.lhs > check.rhs + 1e-9) ++violations;
            worst_gap = std::min(worst_gap, penzl - check.lhs);
        }
    }
    report(12, violations == 0, "ADI / eigenvalue decay",
           fmt("violations %d, tightest margin %.2e", violations, worst_gap), timer.seconds());
}

void criterion_13_colored() {
    Timer timer;
    int violations = 0;
    const NoiseModel noises[] = {NoiseModel::ar1(0.5), NoiseModel::ar1(-0.3),
                                 NoiseModel::ma1(0.7), NoiseModel::ma1(-0.5)};
    for (int i = 0; i < 25; ++i) {
        const int n = 4 + i % 9;
        const InputPair pair = seeded_pair(n, 1, 6000 + static_cast<std::uint64_t>(i));
        for (const NoiseModel& noise : noises) {
            const ColoredBoundCheck check = colored_condition_bound(pair, noise);
            if (check.lhs > check.rhs + 1e-6) ++violations;
        }
    }
    int in_violations = 0;
    for (int n : {6, 12, 18, 24}) {
        const InputPair pair = seeded_pair(n, 1, 6500 + static_cast<std::uint64_t>(n));
        const InTransform t = to_input_normal(pair);
        const InputPair in_pair{t.a_tilde, t.b_tilde};
        for (const NoiseModel& noise : {NoiseModel::ar1(0.5), NoiseModel::ma1(0.7)}) {
            const ComplexMatrix w = state_covariance_colored(in_pair, noise);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(w);
            const double log_kw = std::log(es.eigenvalues()(n - 1) / es.eigenvalues()(0));
            if (log_kw > std::log(noise.s_max / noise.s_min) + 1e-6) ++in_violations;
        }
    }
    report(13, violations == 0 && in_violations == 0, "colored-noise sandwich",
           fmt("violations %d (general), %d (input-normal)", violations, in_violations),
           timer.seconds());
}

void criterion_14_determinism() {
    Timer timer;
    const TableDocument w1 = emit_table("1", kSeed, 400, 1, TableFormat::Csv);
    const TableDocument w4 = emit_table("1", kSeed, 400, 4, TableFormat::Csv);
    const TableDocument w8 = emit_table("1", kSeed, 400, 8, TableFormat::Csv);
    const TableDocument again = emit_table("1", kSeed, 400, 4, TableFormat::Csv);
    const bool pass = w1.text == w4.text && w1.text == w8.text && w1.text == again.text;
    report(14, pass, "worker determinism",
           pass ? "byte-identical across 1/4/8 workers and reruns" : "documents differ",
           timer.seconds());
}

}  // namespace

int main() {
    Timer total;
    std::printf("steinlab acceptance suite (seed %llu)\n",
                static_cast<unsigned long long>(kSeed));
    criterion_1_oracle_equivalence();
    criterion_2_residuals();
    criterion_3_input_normal_identity();
    criterion_4_table1();
    criterion_5_table2();
    criterion_6_table3();
    criterion_7_table4();
    criterion_8_table5();
    criterion_9_companion_svd();
    criterion_10_bilinear();
    criterion_11_power_identity();
    criterion_12_adi_penzl();
    criterion_13_colored();
    criterion_14_determinism();
    std::printf("%d of 14 criteria failed (%.1f s total)\n", failures, total.seconds());
    return failures;
}
