#include "steinlab/bounds.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "steinlab/normal_form.hpp"
#include "steinlab/stein.hpp"

namespace steinlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

bool is_normal_matrix(const ComplexMatrix& a) {
    const double scale = std::max(1.0, a.squaredNorm());
    return (a * a.adjoint() - a.adjoint() * a).norm() <= 1e-10 * scale;
}

bool is_real_symmetric(const ComplexMatrix& a) {
    const double scale = std::max(1.0, a.norm());
    if (a.imag().norm() > 1e-12 * scale) return false;
    return (a - a.transpose()).norm() <= 1e-12 * scale;
}

Complex moebius(Complex z, Complex w) { return (z - w) / (1.0 - std::conj(w) * z); }

}  // namespace

double trans_bound(const ComplexMatrix& a, int d, std::optional<double> sigma_n_prime) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw input_error("trans_bound: matrix must be square and nonempty");
    if (d < 1) throw input_error("trans_bound: d must be >= 1");
    const Spectrum spectrum = Spectrum::from_matrix(a);
    if (!spectrum.stable()) throw input_error("trans_bound: matrix must be stable");
    if (spectrum.min_modulus() == 0.0)
        throw input_error("trans_bound: matrix must be invertible");

    const Eigen::VectorXd sigma = singular_values(a);
    const double log_s1 = std::log(sigma(0));
    const double log_sn = std::log(sigma(sigma.size() - 1));
    double best = std::max(log_s1, -log_s1);
    best = std::max(best, log_sn - spectrum.log_abs_product() / static_cast<double>(d));
    if (sigma_n_prime) best = std::max(best, std::log(*sigma_n_prime) - log_sn);
    return best;
}

double normal_bound(const Spectrum& spectrum, int d, std::optional<double> sigma_n_prime) {
    if (spectrum.empty()) throw input_error("normal_bound: empty spectrum");
    if (!spectrum.stable()) throw input_error("normal_bound: spectrum must be stable");
    const int n = static_cast<int>(spectrum.size());
    if (d < 1) throw input_error("normal_bound: d must be >= 1");

    if (d == 1) {
        double sum = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            const double m = std::abs(spectrum.eigenvalues()[static_cast<std::size_t>(i)]);
            if (m == 0.0) return std::numeric_limits<double>::infinity();
            sum += std::log(m);
        }
        return -2.0 * sum;
    }
    if (d >= n) throw input_error("normal_bound: general form needs d < n");

    const double min_mod = spectrum.min_modulus();
    if (min_mod == 0.0)
        throw input_error("normal_bound: general form needs a nonzero smallest eigenvalue");
    double best = 2.0 * std::log(min_mod) -
                  2.0 / static_cast<double>(d) * spectrum.log_abs_product();
    best = std::max(best, -2.0 * std::log(spectrum.spectral_radius()));
    if (sigma_n_prime)
        best = std::max(best, 2.0 * std::log(*sigma_n_prime) - 2.0 * std::log(min_mod));
    return best;
}

double power_bound(double sigma1, int n, int d) {
    if (!(sigma1 > 0.0)) throw input_error("power_bound: sigma1 must be positive");
    if (n < 1 || d < 1) throw input_error("power_bound: need n, d >= 1");
    const int k = (n - 1) / d;
    return -2.0 * static_cast<double>(k) * std::log(sigma1);
}

CompanionSingularValues companion_singular_values(const CompanionSpec& spec) {
    spec.validate();
    const Eigen::Index n = spec.n();
    if (n <= 2) throw input_error("companion_singular_values: need n > 2");

    CompanionSpectralData data;
    const double c0_sq = std::norm(spec.c0);
    const double c_sq = spec.c.squaredNorm();
    data.gamma_big = 1.0 + c0_sq + c_sq;
    data.omega = c0_sq + (spec.gamma == 1 ? std::norm(spec.c(spec.p - 1)) : 0.0);
    const double disc = std::sqrt(std::max(data.gamma_big * data.gamma_big - 4.0 * data.omega, 0.0));
    data.mu_plus = 0.5 * (data.gamma_big + disc);
    data.mu_minus = data.mu_plus > 0.0 ? data.omega / data.mu_plus : 0.0;

    CompanionSingularValues out;
    out.data = data;
    out.singular_values.push_back(std::sqrt(data.mu_plus));
    for (Eigen::Index i = 0; i < n - 2 - spec.gamma; ++i) out.singular_values.push_back(1.0);
    out.singular_values.push_back(std::sqrt(data.mu_minus));
    if (spec.gamma == 1) out.singular_values.push_back(0.0);
    return out;
}

CompanionBound companion_bound(const CompanionSpec& spec) {
    const CompanionSpectralData data = companion_singular_values(spec).data;
    const double gamma_big = data.gamma_big;
    const double omega = data.omega;

    CompanionBound out;
    out.log_mu_plus = std::log(data.mu_plus);
    const double pi_c_sq =
        spec.c.squaredNorm() - (spec.gamma == 1 ? std::norm(spec.c(spec.p - 1)) : 0.0);
    out.chain_lower_0 = 1.0 + pi_c_sq;
    out.chain_lower_1 = gamma_big - omega / (gamma_big - omega);
    out.chain_upper_1 = gamma_big - omega / (gamma_big - omega / gamma_big);
    out.chain_upper_0 = gamma_big;
    return out;
}

double companion_positive_bound(const Spectrum& spectrum) {
    if (spectrum.empty()) throw input_error("companion_positive_bound: empty spectrum");
    const int n = static_cast<int>(spectrum.size());
    double prod_one_plus = 1.0;
    double prod_sq = 1.0;
    for (const Complex& v : spectrum.eigenvalues()) {
        if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())) || v.real() <= 0.0)
            throw input_error("companion_positive_bound: eigenvalues must be positive real");
        if (v.real() >= 1.0)
            throw input_error("companion_positive_bound: eigenvalues must be < 1");
        prod_one_plus *= 1.0 + v.real();
        prod_sq *= v.real() * v.real();
    }
    const double value = prod_one_plus * prod_one_plus / (n + 1.0) - prod_sq;
    return std::log(value);
}

JordanBound jordan_bound(Complex lambda0, int n) {
    const double m = std::abs(lambda0);
    if (!(m > 0.0 && m < 1.0))
        throw input_error("jordan_bound: |lambda0| must lie in (0, 1)");
    if (n < 1) throw input_error("jordan_bound: need n >= 1");
    const double nn = static_cast<double>(n);
    JordanBound out;
    out.strong = -2.0 * std::log(nn);
    out.weak = 2.0 * (-1.0 - std::log(nn));
    if (n > 1) {
        out.strong += 2.0 * (nn - 1.0) * std::log((1.0 - 1.0 / nn) / (1.0 - m));
        out.weak += 2.0 * (nn - 1.0) * std::log(1.0 / (1.0 - m));
    }
    return out;
}

double kreiss_lower(const ComplexMatrix& a, const std::vector<Complex>& grid) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw input_error("kreiss_lower: matrix must be square and nonempty");
    if (grid.empty()) throw input_error("kreiss_lower: grid must be nonempty");
    if (!Spectrum::from_matrix(a).stable())
        throw input_error("kreiss_lower: matrix must be stable");

    const Eigen::Index n = a.rows();
    double best = 0.0;
    for (const Complex& z : grid) {
        if (!(std::abs(z) > 1.0))
            throw input_error("kreiss_lower: grid points must satisfy |z| > 1");
        const ComplexMatrix shifted = z * ComplexMatrix::Identity(n, n) - a;
        const Eigen::VectorXd sigma = singular_values(shifted);
        const double sn = sigma(sigma.size() - 1);
        if (sn == 0.0) return std::numeric_limits<double>::infinity();
        best = std::max(best, (std::abs(z) - 1.0) / sn);
    }
    return std::log(best);
}

std::vector<Complex> kreiss_default_grid() {
    std::vector<Complex> grid;
    grid.reserve(64 * 16);
    for (int i = 1; i <= 16; ++i) {
        const double r = std::pow(2.0, static_cast<double>(i) / 16.0);
        for (int k = 0; k < 64; ++k) {
            const double theta = 2.0 * kPi * static_cast<double>(k) / 64.0;
            grid.emplace_back(r * std::cos(theta), r * std::sin(theta));
        }
    }
    return grid;
}

Complex kreiss_jordan_point(Complex lambda0, int n) {
    if (n < 2) throw input_error("kreiss_jordan_point: need n >= 2");
    const double m = std::abs(lambda0);
    if (m == 0.0) throw input_error("kreiss_jordan_point: lambda0 must be nonzero");
    const double radius = (static_cast<double>(n) - m) / (static_cast<double>(n) - 1.0);
    return radius * (lambda0 / m);
}

double frac_normal_bound(const Spectrum& spectrum, Complex w, int d) {
    if (spectrum.empty()) throw input_error("frac_normal_bound: empty spectrum");
    if (!(std::abs(w) < 1.0)) throw input_error("frac_normal_bound: |w| must be < 1");
    if (d < 1) throw input_error("frac_normal_bound: d must be >= 1");

    double min_log = std::numeric_limits<double>::infinity();
    double sum_log = 0.0;
    for (const Complex& lambda : spectrum.eigenvalues()) {
        const Complex denom = 1.0 - std::conj(w) * lambda;
        if (std::abs(denom) == 0.0)
            throw input_error("frac_normal_bound: pole at an eigenvalue");
        const double m = std::abs(moebius(lambda, w));
        if (m == 0.0) throw input_error("frac_normal_bound: zero at an eigenvalue");
        const double lg = std::log(m);
        min_log = std::min(min_log, lg);
        sum_log += lg;
    }
    return 2.0 * min_log - 2.0 / static_cast<double>(d) * sum_log;
}

FracOptimum optimize_frac_normal(const Spectrum& spectrum, int d) {
    auto try_point = [&](Complex w, FracOptimum& best) {
        if (std::abs(w) >= 0.995) return;
        try {
            const double v = frac_normal_bound(spectrum, w, d);
            if (v > best.value) best = {w, v};
        } catch (const input_error&) {
            // pole or zero at an eigenvalue; skip the grid point
        }
    };

    FracOptimum best{Complex(0, 0), frac_normal_bound(spectrum, Complex(0, 0), d)};
    const int grid = 33;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double re = -0.97 + 1.94 * static_cast<double>(i) / (grid - 1);
            const double im = -0.97 + 1.94 * static_cast<double>(j) / (grid - 1);
            try_point(Complex(re, im), best);
        }
    double step = 1.94 / (grid - 1);
    for (int round = 0; round < 40 && step > 1e-5; ++round) {
        FracOptimum candidate = best;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0) continue;
                try_point(best.w + Complex(di * step, dj * step), candidate);
            }
        if (candidate.value > best.value)
            best = candidate;
        else
            step *= 0.5;
    }
    return best;
}

double disk_bound(Complex x, double rho, int k) {
    if (!(rho > 0.0)) throw input_error("disk_bound: rho must be positive");
    if (k < 1) throw input_error("disk_bound: k must be >= 1");
    if (!(std::abs(x) + rho < 1.0))
        throw input_error("disk_bound: disk must stay inside the unit circle");
    const double denom = 1.0 - std::abs(x) * rho - rho * rho;
    return -2.0 * static_cast<double>(k) * std::log(rho / denom);
}

AdiState adi_iterate(const ContinuousPair& pair, const std::vector<Complex>& shifts) {
    if (pair.a.rows() != pair.a.cols() || pair.a.rows() == 0)
        throw input_error("adi_iterate: advance matrix must be square and nonempty");
    if (pair.b.rows() != pair.a.rows())
        throw input_error("adi_iterate: b must have the same row count as a");
    const Eigen::Index n = pair.a.rows();
    const Eigen::Index d = pair.b.cols();

    ComplexMatrix factor(n, 0);
    int k = 0;
    for (const Complex& tau : shifts) {
        if (!(tau.real() < 0.0))
            throw input_error("adi_iterate: shifts must lie in the open left half-plane");
        const ComplexMatrix m = pair.a + std::conj(tau) * ComplexMatrix::Identity(n, n);
        Eigen::PartialPivLU<ComplexMatrix> lu(m);

        ComplexMatrix next(n, factor.cols() + d);
        if (factor.cols() > 0)
            next.leftCols(factor.cols()) =
                lu.solve(((pair.a - tau * ComplexMatrix::Identity(n, n)) * factor).eval());
        next.rightCols(d) = std::sqrt(-2.0 * tau.real()) * lu.solve(pair.b);
        if (!all_finite(next))
            throw numeric_error("adi_iterate: singular shift resolvent");
        factor = std::move(next);
        ++k;
    }
    return {shifts, std::move(factor), k};
}

double penzl_bound(double kappa_hat, int k) {
    if (!(kappa_hat >= 1.0)) throw input_error("penzl_bound: kappa_hat must be >= 1");
    if (k < 1) throw input_error("penzl_bound: k must be >= 1");
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
        const double t = std::pow(kappa_hat, (2.0 * j + 1.0) / (2.0 * k));
        if (t <= 1.0) return kLogFloor;
        sum += std::log((t - 1.0) / (t + 1.0));
    }
    return std::max(2.0 * sum, kLogFloor);
}

std::vector<Complex> penzl_shifts(double a, double b, int k) {
    if (!(a > 0.0) || !(b >= a)) throw input_error("penzl_shifts: need 0 < a <= b");
    if (k < 1) throw input_error("penzl_shifts: k must be >= 1");
    const double kappa_hat = b / a;
    std::vector<Complex> shifts;
    shifts.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        shifts.emplace_back(-a * std::pow(kappa_hat, (2.0 * j + 1.0) / (2.0 * k)), 0.0);
    return shifts;
}

DecayCheck adi_decay_check(const InputPair& pair, int k, const std::vector<Complex>& shifts) {
    pair.validate();
    const Eigen::Index n = pair.n();
    const Eigen::Index d = pair.d();
    if (k < 1 || static_cast<Eigen::Index>(k) * d >= n)
        throw input_error("adi_decay_check: need 1 <= k with k d < n");
    if (static_cast<int>(shifts.size()) < k)
        throw input_error("adi_decay_check: not enough shifts");

    const SteinSolution sol = solve_stein_sqrt_doubling(pair);
    const ComplexMatrix p = sol.factor_l * sol.factor_l.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p);
    if (es.info() != Eigen::Success)
        throw numeric_error("adi_decay_check: eigendecomposition failed");
    const double lambda1 = es.eigenvalues()(n - 1);
    const double lambda_kd1 = std::max(es.eigenvalues()(n - 1 - k * d), 0.0);

    const ContinuousPair cp = cayley(pair);
    const AdiState state =
        adi_iterate(cp, std::vector<Complex>(shifts.begin(), shifts.begin() + k));
    const ComplexMatrix pk = state.factor * state.factor.adjoint();

    Eigen::JacobiSVD<ComplexMatrix> diff_svd(p - pk);
    Eigen::JacobiSVD<ComplexMatrix> p_svd(p);
    DecayCheck out;
    out.lhs = lambda_kd1 / lambda1;
    out.rhs = diff_svd.singularValues()(0) / p_svd.singularValues()(0);
    return out;
}

BoundReport evaluate_bounds(const InputPair& pair) {
    pair.validate();
    const int n = static_cast<int>(pair.n());
    const int d = static_cast<int>(pair.d());
    const Spectrum spectrum = Spectrum::from_matrix(pair.a);
    if (!spectrum.stable()) throw input_error("evaluate_bounds: pair must be stable");

    BoundReport report;
    auto put = [&report](const std::string& name, double value) {
        if (std::isfinite(value)) {
            report.entries[name] = value;
            report.applicable.insert(name);
        }
    };

    const Eigen::VectorXd sigma = singular_values(pair.a);
    put("power", power_bound(sigma(0), n, d));

    if (spectrum.min_modulus() > 0.0) put("trans", 2.0 * trans_bound(pair.a, d));

    const bool normal = is_normal_matrix(pair.a);
    if (normal) {
        if (d == 1) put("normal-d1", normal_bound(spectrum, 1));
        if (d < n) put("normal", normal_bound(spectrum, d));
        put("frac-normal", optimize_frac_normal(spectrum, d).value);
        Complex center(0, 0);
        for (const Complex& v : spectrum.eigenvalues()) center += v;
        center /= static_cast<double>(n);
        double rho = 0.0;
        for (const Complex& v : spectrum.eigenvalues())
            rho = std::max(rho, std::abs(v - center));
        rho *= 1.0 + 1e-12;
        if (rho > 0.0 && std::abs(center) + rho < 1.0 && (n - 1) / d >= 1)
            put("disk", disk_bound(center, rho, (n - 1) / d));
    }

    put("kreiss", 2.0 * kreiss_lower(pair.a, kreiss_default_grid()));

    if (is_real_symmetric(pair.a) && (n - 1) / d >= 1) {
        const ContinuousPair cp = cayley(pair);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(cp.a);
        if (es.info() == Eigen::Success) {
            const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
            const double lo = es.eigenvalues().cwiseAbs().minCoeff();
            if (lo > 0.0) put("penzl", -penzl_bound(hi / lo, (n - 1) / d));
        }
    }
    return report;
}

BoundReport evaluate_bounds(const Spectrum& spectrum, int d) {
    if (spectrum.empty()) throw input_error("evaluate_bounds: empty spectrum");
    if (!spectrum.stable()) throw input_error("evaluate_bounds: spectrum must be stable");
    const int n = static_cast<int>(spectrum.size());

    BoundReport report;
    auto put = [&report](const std::string& name, double value) {
        if (std::isfinite(value)) {
            report.entries[name] = value;
            report.applicable.insert(name);
        }
    };

    // Singular values of a normal realization are the eigenvalue moduli.
    put("power", power_bound(spectrum.spectral_radius(), n, d));
    if (d == 1) put("normal-d1", normal_bound(spectrum, 1));
    if (d < n) put("normal", normal_bound(spectrum, d));
    put("frac-normal", optimize_frac_normal(spectrum, d).value);

    if (spectrum.min_modulus() > 0.0) {
        const double r1 = spectrum.spectral_radius();
        double t = std::max(std::log(r1), -std::log(r1));
        t = std::max(t, std::log(spectrum.min_modulus()) -
                            spectrum.log_abs_product() / static_cast<double>(d));
        put("trans", 2.0 * t);
    }

    Complex center(0, 0);
    for (const Complex& v : spectrum.eigenvalues()) center += v;
    center /= static_cast<double>(n);
    double rho = 0.0;
    for (const Complex& v : spectrum.eigenvalues()) rho = std::max(rho, std::abs(v - center));
    rho *= 1.0 + 1e-12;
    if (rho > 0.0 && std::abs(center) + rho < 1.0 && (n - 1) / d >= 1)
        put("disk", disk_bound(center, rho, (n - 1) / d));

    if (n > 2) put("companion-mu", companion_bound(charpoly_from_spectrum(spectrum)).log_mu_plus);
    try {
        put("companion-positive", companion_positive_bound(spectrum));
    } catch (const input_error&) {
        // spectrum is not positive real; not applicable
    }
    return report;
}

BoundReport evaluate_bounds_jordan(Complex lambda0, int n) {
    const JordanBound jb = jordan_bound(lambda0, n);
    BoundReport report;
    report.entries["jordan"] = jb.strong;
    report.entries["jordan-weak"] = jb.weak;
    report.applicable.insert("jordan");
    report.applicable.insert("jordan-weak");

    const ComplexMatrix j = build_jordan(lambda0, n);
    const Eigen::VectorXd sigma = singular_values(j);
    report.entries["power"] = power_bound(sigma(0), n, 1);
    report.applicable.insert("power");
    report.entries["trans"] = 2.0 * trans_bound(j, 1);
    report.applicable.insert("trans");

    std::vector<Complex> grid = kreiss_default_grid();
    if (n >= 2) grid.push_back(kreiss_jordan_point(lambda0, n));
    const double kreiss = 2.0 * kreiss_lower(j, grid);
    if (std::isfinite(kreiss)) {
        report.entries["kreiss"] = kreiss;
        report.applicable.insert("kreiss");
    }
    return report;
}

}  // namespace steinlab
