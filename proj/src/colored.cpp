#include "steinlab/colored.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

#include "steinlab/stein.hpp"

namespace steinlab {

NoiseModel NoiseModel::white(double phi0) {
    if (!(phi0 > 0.0)) throw input_error("noise: white variance must be positive");
    NoiseModel m;
    m.kind = Kind::White;
    m.s_min = m.s_max = phi0;
    m.autocov = [phi0](int k) { return k == 0 ? phi0 : 0.0; };
    return m;
}

NoiseModel NoiseModel::ar1(double a) {
    if (!(std::abs(a) < 1.0)) throw input_error("noise: ar1 coefficient needs |a| < 1");
    NoiseModel m;
    m.kind = Kind::Ar1;
    m.param = a;
    const double v = 1.0 / (1.0 - a * a);
    m.autocov = [a, v](int k) { return v * std::pow(a, k); };
    // Spectral density 1/|1 - a e^{-i w}|^2 peaks at w = 0 or pi.
    m.s_max = 1.0 / ((1.0 - std::abs(a)) * (1.0 - std::abs(a)));
    m.s_min = 1.0 / ((1.0 + std::abs(a)) * (1.0 + std::abs(a)));
    return m;
}

NoiseModel NoiseModel::ma1(double a) {
    if (!(std::abs(a) < 1.0)) throw input_error("noise: ma1 coefficient needs |a| < 1");
    NoiseModel m;
    m.kind = Kind::Ma1;
    m.param = a;
    m.autocov = [a](int k) {
        if (k == 0) return 1.0 + a * a;
        if (k == 1) return a;
        return 0.0;
    };
    m.s_max = (1.0 + std::abs(a)) * (1.0 + std::abs(a));
    m.s_min = (1.0 - std::abs(a)) * (1.0 - std::abs(a));
    return m;
}

NoiseModel NoiseModel::custom(std::function<double(int)> autocov, double s_min, double s_max) {
    if (!autocov) throw input_error("noise: custom model needs an autocovariance rule");
    if (!(s_min > 0.0) || !(s_max >= s_min))
        throw input_error("noise: custom model needs 0 < s_min <= s_max");
    NoiseModel m;
    m.kind = Kind::Custom;
    m.autocov = std::move(autocov);
    m.s_min = s_min;
    m.s_max = s_max;
    if (!(m.phi(0) > 0.0)) throw input_error("noise: phi_0 must be positive");
    return m;
}

std::string NoiseModel::kind_name() const {
    switch (kind) {
        case Kind::White: return "white";
        case Kind::Ar1: return "ar1";
        case Kind::Ma1: return "ma1";
        case Kind::Custom: return "custom";
    }
    return "unknown";
}

namespace {

// Lags beyond this contribute below double precision and are dropped.
int lag_window(const NoiseModel& noise) {
    switch (noise.kind) {
        case NoiseModel::Kind::White: return 0;
        case NoiseModel::Kind::Ma1: return 1;
        case NoiseModel::Kind::Ar1: {
            const double a = std::abs(noise.param);
            if (a == 0.0) return 0;
            return static_cast<int>(std::ceil(std::log(1e-17) / std::log(a)));
        }
        case NoiseModel::Kind::Custom: {
            const double phi0 = noise.phi(0);
            int last = 0;
            for (int k = 1; k <= 8192; ++k)
                if (std::abs(noise.phi(k)) > 1e-17 * phi0) last = k;
            if (std::abs(noise.phi(8192)) > 1e-17 * phi0)
                throw input_error(
                    "state_covariance_colored: custom autocovariance does not decay");
            return last;
        }
    }
    return 0;
}

// W_t = M_t Phi_t M_t* accumulated by lag:
//   W_t = phi(0) S_t + sum_{l>=1} phi(l) (A^l S_{t-l} + (A^l S_{t-l})*)
// with the partial Grammian S_r = sum_{j<r} m_j m_j*, so no t x t matrix
// is ever formed. Tail corrections S_{t-l} = S_t - sum_{j>=t-l} m_j m_j*
// come from a ring buffer of the last `lags` columns.
ComplexMatrix covariance_at_horizon(const InputPair& pair, const NoiseModel& noise, int t,
                                    int lags) {
    const Eigen::Index n = pair.n();
    const int window = std::min(lags, t - 1);

    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    std::vector<ComplexVector> recent(static_cast<std::size_t>(window) + 1);
    ComplexVector m = pair.b.col(0);
    for (int j = 0; j < t; ++j) {
        s.noalias() += m * m.adjoint();
        if (window > 0) recent[static_cast<std::size_t>(j % (window + 1))] = m;
        if (j + 1 < t) m = (pair.a * m).eval();
    }

    ComplexMatrix w = noise.phi(0) * s;
    ComplexMatrix tail = ComplexMatrix::Zero(n, n);  // sum_{j >= t-l} m_j m_j*
    ComplexMatrix a_power = ComplexMatrix::Identity(n, n);
    for (int l = 1; l <= window; ++l) {
        const ComplexVector& dropped = recent[static_cast<std::size_t>((t - l) % (window + 1))];
        tail.noalias() += dropped * dropped.adjoint();
        a_power = (pair.a * a_power).eval();
        const ComplexMatrix g = a_power * (s - tail);
        w += noise.phi(l) * (g + g.adjoint());
    }
    return 0.5 * (w + w.adjoint()).eval();
}

}  // namespace

ComplexMatrix state_covariance_colored(const InputPair& pair, const NoiseModel& noise,
                                       double tol) {
    pair.validate();
    if (pair.d() != 1)
        throw input_error("state_covariance_colored: scalar forcing only (d = 1)");
    if (!(tol > 0.0)) throw input_error("state_covariance_colored: tol must be positive");
    if (!noise.autocov) throw input_error("state_covariance_colored: noise lacks autocovariance");

    constexpr int kMaxHorizon = 1 << 18;
    const int lags = lag_window(noise);
    ComplexMatrix w = covariance_at_horizon(pair, noise, 8, lags);
    for (int t = 16; t <= kMaxHorizon; t *= 2) {
        ComplexMatrix next = covariance_at_horizon(pair, noise, t, lags);
        const double increment = (next - w).norm();
        w = std::move(next);
        if (increment <= tol * w.norm()) return w;
    }
    throw numeric_error(
        "state_covariance_colored: no convergence (spectral radius too close to 1 for tol)");
}

ColoredBoundCheck colored_condition_bound(const InputPair& pair, const NoiseModel& noise) {
    const SteinSolution sol = solve_stein_sqrt_doubling(pair);
    const ComplexMatrix w = state_covariance_colored(pair, noise);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(w);
    if (es.info() != Eigen::Success)
        throw numeric_error("colored_condition_bound: eigendecomposition failed");
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(w.rows() - 1);
    if (!(lo > 0.0))
        throw numeric_error("colored_condition_bound: state covariance numerically singular");

    ColoredBoundCheck out;
    out.lhs = std::log(hi / lo);
    out.rhs = sol.log_kappa + std::log(noise.s_max / noise.s_min);
    return out;
}

SandwichCheck sandwich_lemma_check(const ComplexMatrix& phi, const ComplexMatrix& m) {
    if (phi.rows() != phi.cols() || phi.rows() == 0)
        throw input_error("sandwich_lemma_check: phi must be square and nonempty");
    if ((phi - phi.adjoint()).norm() > 1e-10 * std::max(1.0, phi.norm()))
        throw input_error("sandwich_lemma_check: phi must be Hermitian");
    if (m.cols() != phi.rows() || m.rows() > m.cols())
        throw input_error("sandwich_lemma_check: m must be r x n with r <= n matching phi");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> phi_es(phi);
    if (phi_es.info() != Eigen::Success || !(phi_es.eigenvalues()(0) > 0.0))
        throw input_error("sandwich_lemma_check: phi must be positive definite");

    Eigen::JacobiSVD<ComplexMatrix> m_svd(m);
    const Eigen::Index r = m.rows();
    const double sigma_r = m_svd.singularValues()(r - 1);
    if (!(sigma_r > 0.0)) throw input_error("sandwich_lemma_check: m is rank deficient");

    const ComplexMatrix product = m * phi * m.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> prod_es(
        (0.5 * (product + product.adjoint())).eval());
    if (prod_es.info() != Eigen::Success)
        throw numeric_error("sandwich_lemma_check: eigendecomposition failed");

    SandwichCheck out;
    out.lhs = prod_es.eigenvalues()(r - 1) / prod_es.eigenvalues()(0);
    const double kappa_phi = phi_es.eigenvalues()(phi.rows() - 1) / phi_es.eigenvalues()(0);
    const double kappa_m = m_svd.singularValues()(0) / sigma_r;
    out.rhs = kappa_phi * kappa_m * kappa_m;
    return out;
}

}  // namespace steinlab
