#include "steinlab/normal_form.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace steinlab {

namespace {

double in_defect(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Eigen::Index n = a.rows();
    return (a * a.adjoint() + b * b.adjoint() - ComplexMatrix::Identity(n, n)).norm();
}

}  // namespace

double input_normal_residual(const InputPair& pair) {
    pair.validate();
    return in_defect(pair.a, pair.b);
}

InTransform to_input_normal(const InputPair& pair) {
    pair.validate();
    const Eigen::Index n = pair.n();

    SteinSolution sol = solve_stein_sqrt_doubling(pair);
    ComplexMatrix l = sol.factor_l;
    auto lower_solve = [](const ComplexMatrix& fac, const ComplexMatrix& rhs) {
        return fac.triangularView<Eigen::Lower>().solve(rhs).eval();
    };

    ComplexMatrix a_tilde = lower_solve(l, (pair.a * l).eval());
    ComplexMatrix b_tilde = lower_solve(l, pair.b);

    // One or two factored solves in the transformed coordinates polish the
    // factor: the equation there is perfectly conditioned, so the normal
    // identity lands at round-off even when kappa(P) is large.
    for (int pass = 0; pass < 3; ++pass) {
        const double defect = in_defect(a_tilde, b_tilde);
        if (defect <= 1e-13 * static_cast<double>(n)) break;
        try {
            SteinSolution polish = solve_stein_sqrt_doubling({a_tilde, b_tilde});
            const ComplexMatrix& g = polish.factor_l;
            ComplexMatrix a_next = lower_solve(g, (a_tilde * g).eval());
            ComplexMatrix b_next = lower_solve(g, b_tilde);
            if (in_defect(a_next, b_next) >= defect) break;
            a_tilde = std::move(a_next);
            b_tilde = std::move(b_next);
            l = (l * g).eval();
        } catch (const numeric_error&) {
            break;  // keep the best factor found so far
        }
    }

    InTransform out;
    out.t = lower_solve(l, ComplexMatrix::Identity(n, n));
    out.a_tilde = std::move(a_tilde);
    out.b_tilde = std::move(b_tilde);
    out.log_kappa_t = 0.5 * cond_from_factor(l);
    return out;
}

ComplexMatrix in_complete(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw input_error("in_complete: matrix must be square and nonempty");
    if (!(tol > 0.0)) throw input_error("in_complete: tol must be positive");
    if (!Spectrum::from_matrix(a).stable())
        throw input_error("in_complete: matrix must be stable");

    const Eigen::Index n = a.rows();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a * a.adjoint());
    if (es.info() != Eigen::Success)
        throw numeric_error("in_complete: eigendecomposition failed");
    const double mu_max = es.eigenvalues()(n - 1);  // sigma_1(A)^2
    if (std::abs(std::sqrt(std::max(mu_max, 0.0)) - 1.0) > tol)
        throw input_error("in_complete: sigma_1(A) deviates from 1 beyond tol");

    Eigen::Index d = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (es.eigenvalues()(i) < 1.0 - tol) ++d;

    // Eigenvalues ascend, which is exactly the required column order.
    ComplexMatrix b(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double mu = std::max(es.eigenvalues()(j), 0.0);
        b.col(j) = std::sqrt(std::max(1.0 - mu, 0.0)) * es.eigenvectors().col(j);
    }
    return b;
}

InputPair bilinear_transform(const InputPair& pair, Complex w) {
    pair.validate();
    if (!(std::abs(w) < 1.0)) throw input_error("bilinear_transform: |w| must be < 1");
    const Eigen::Index n = pair.n();
    const ComplexMatrix m = ComplexMatrix::Identity(n, n) - std::conj(w) * pair.a;
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    ComplexMatrix a_hat = lu.solve(pair.a - w * ComplexMatrix::Identity(n, n));
    ComplexMatrix b_hat = std::sqrt(1.0 - std::norm(w)) * lu.solve(pair.b);
    if (!all_finite(a_hat) || !all_finite(b_hat))
        throw numeric_error("bilinear_transform: I - conj(w) A is singular");
    return {std::move(a_hat), std::move(b_hat)};
}

ContinuousPair cayley(const InputPair& pair) {
    pair.validate();
    const Eigen::Index n = pair.n();
    const ComplexMatrix m = ComplexMatrix::Identity(n, n) + pair.a;
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    ComplexMatrix a_hat = lu.solve(pair.a - ComplexMatrix::Identity(n, n));
    ComplexMatrix b_hat = std::sqrt(2.0) * lu.solve(pair.b);
    if (!all_finite(a_hat) || !all_finite(b_hat))
        throw numeric_error("cayley: -1 lies in the spectrum of A");
    return {std::move(a_hat), std::move(b_hat)};
}

double verify_power_identity(const InputPair& in_pair, double in_tol) {
    in_pair.validate();
    const Eigen::Index n = in_pair.n();
    const Eigen::Index d = in_pair.d();
    const double tol = in_tol < 0.0 ? 1e-8 * static_cast<double>(n) : in_tol;
    if (in_defect(in_pair.a, in_pair.b) > tol)
        throw input_error("verify_power_identity: pair is not input normal within tol");

    double max_dev = 0.0;
    ComplexMatrix power = in_pair.a;
    for (Eigen::Index k = 1; k * d < n; ++k) {
        Eigen::JacobiSVD<ComplexMatrix> svd(power);
        max_dev = std::max(max_dev, std::abs(svd.singularValues()(0) - 1.0));
        power = (power * in_pair.a).eval();
    }
    return max_dev;
}

}  // namespace steinlab
