#include "steinlab/stein.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace steinlab {

namespace {

double spectral_radius(const ComplexMatrix& a) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(a, false);
    if (es.info() != Eigen::Success)
        throw numeric_error("stein: eigenvalue computation failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Lower-triangular n x n factor with L L* = C C*, via Householder QR of C*.
// Columns are phase-normalized so the diagonal is real and >= 0.
ComplexMatrix compress_factor(const ComplexMatrix& c) {
    const Eigen::Index n = c.rows();
    Eigen::HouseholderQR<ComplexMatrix> qr(c.adjoint());
    ComplexMatrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    ComplexMatrix l = r.adjoint();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex d = l(j, j);
        const double m = std::abs(d);
        if (m > 0.0) l.col(j) *= std::conj(d) / m;
    }
    return l;
}

// sigma_n(L) = 1 / ||L^{-1}||_2, estimated by power iteration on
// L^{-*} L^{-1} using triangular solves only. Triangular solves have
// componentwise-small backward error, which keeps the estimate meaningful
// for graded factors whose smallest singular value sits far below
// eps * sigma_1 -- the regime where a dense SVD bottoms out.
double smallest_singular_by_solves(const ComplexMatrix& l) {
    const Eigen::Index n = l.rows();
    ComplexVector v(n);
    // Fixed, generic start vector.
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1);
        v(i) = Complex(std::cos(2.3 * t) + 0.5, std::sin(1.7 * t) - 0.25);
    }
    v.normalize();
    double norm_inv = 0.0;
    auto lower = l.triangularView<Eigen::Lower>();
    auto upper = l.adjoint().triangularView<Eigen::Upper>();
    for (int it = 0; it < 48; ++it) {
        ComplexVector w = lower.solve(v);
        ComplexVector z = upper.solve(w);
        const double nz = z.norm();
        if (!std::isfinite(nz) || nz == 0.0)
            throw numeric_error("cond_from_factor: singular triangular factor");
        const double est = std::sqrt(nz);  // ||L^{-1}||_2 estimate, since z ~ (L^-* L^-1) v
        v = z / nz;
        if (it > 2 && std::abs(est - norm_inv) <= 1e-12 * est) {
            norm_inv = est;
            break;
        }
        norm_inv = est;
    }
    return 1.0 / norm_inv;
}

}  // namespace

ComplexMatrix solve_stein_direct(const InputPair& pair) {
    pair.validate();
    const Eigen::Index n = pair.n();
    if (n > 32)
        throw input_error("solve_stein_direct: dense Kronecker solve capped at n <= 32");
    if (spectral_radius(pair.a) >= 1.0)
        throw numeric_error("solve_stein_direct: pair is not stable, solution not unique");

    const ComplexMatrix& a = pair.a;
    ComplexMatrix rhs_mat = pair.b * pair.b.adjoint();

    // vec(A P A*) = (conj(A) kron A) vec(P), column-major vec.
    const Eigen::Index nn = n * n;
    ComplexMatrix k = ComplexMatrix::Identity(nn, nn);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            k.block(i * n, j * n, n, n) -= std::conj(a(i, j)) * a;

    Eigen::Map<const ComplexVector> rhs(rhs_mat.data(), nn);
    Eigen::PartialPivLU<ComplexMatrix> lu(k);
    ComplexVector x = lu.solve(rhs);
    if (!x.allFinite())
        throw numeric_error("solve_stein_direct: singular Kronecker system");

    ComplexMatrix p = Eigen::Map<ComplexMatrix>(x.data(), n, n);
    return 0.5 * (p + p.adjoint()).eval();
}

SteinSolution solve_stein_sqrt_doubling(const InputPair& pair, double tol, int max_iter,
                                        const DoublingHook& hook) {
    pair.validate();
    if (tol <= 0.0) throw input_error("solve_stein_sqrt_doubling: tol must be positive");
    const Eigen::Index n = pair.n();
    const Eigen::Index d = pair.d();

    // L_0 L_0* = B B*.
    ComplexMatrix l = ComplexMatrix::Zero(n, n);
    {
        Eigen::HouseholderQR<ComplexMatrix> qr(pair.b.adjoint());
        ComplexMatrix r = qr.matrixQR().topRows(std::min(n, d)).triangularView<Eigen::Upper>();
        l.leftCols(std::min(n, d)) = r.adjoint();
    }

    ComplexMatrix ak = pair.a;
    bool converged = false;
    int iterations = 0;
    for (int k = 0; k <= max_iter; ++k) {
        const double a_norm2 = ak.squaredNorm();
        const double l_norm2 = l.squaredNorm();
        if (a_norm2 < 1.0) {
            // Remaining tail: ||P - P_k||_F <= ||A_k L_k||_F^2 / (1 - ||A_k||^2).
            const double increment2 = (ak * l).squaredNorm();
            if (increment2 <= tol * l_norm2 * (1.0 - a_norm2)) {
                converged = true;
                break;
            }
        }
        if (k == max_iter) break;

        ComplexMatrix stacked(n, 2 * n);
        stacked.leftCols(n) = l;
        stacked.rightCols(n).noalias() = ak * l;
        l = compress_factor(stacked);
        ak = (ak * ak).eval();
        iterations = k + 1;
        if (hook) hook(iterations, l);
    }
    if (!converged)
        throw numeric_error(
            "solve_stein_sqrt_doubling: no convergence in " + std::to_string(max_iter) +
            " doublings (spectral radius too close to 1)");

    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(l(j, j).real() > 0.0))
            throw numeric_error(
                "solve_stein_sqrt_doubling: factor lost positivity "
                "(pair is numerically uncontrollable)");
    }

    SteinSolution out;
    out.factor_l = l;
    out.iterations = iterations;
    out.residual_rel = stein_residual(pair, (l * l.adjoint()).eval());
    out.log_kappa = cond_from_factor(l);
    return out;
}

double stein_residual(const InputPair& pair, const ComplexMatrix& p) {
    const ComplexMatrix bbs = pair.b * pair.b.adjoint();
    const ComplexMatrix r = p - pair.a * p * pair.a.adjoint() - bbs;
    const double denom = bbs.norm();
    if (denom == 0.0) return r.norm();
    return r.norm() / denom;
}

double cond_from_factor(const ComplexMatrix& l) {
    if (l.rows() != l.cols() || l.rows() == 0)
        throw input_error("cond_from_factor: factor must be square and nonempty");
    const Eigen::Index n = l.rows();

    Eigen::JacobiSVD<ComplexMatrix> svd(l);
    const double sigma1 = svd.singularValues()(0);
    double sigman = svd.singularValues()(n - 1);
    if (sigma1 == 0.0)
        throw numeric_error("cond_from_factor: zero factor");

    // Below ~eps * sigma_1 the dense SVD only returns its own round-off
    // floor; the graded factor still encodes the true value, which the
    // solve-based estimate recovers.
    if (sigman < 1e-12 * sigma1) {
        for (Eigen::Index j = 0; j < n; ++j)
            if (l(j, j) == Complex(0.0, 0.0))
                throw numeric_error("cond_from_factor: singular factor (zero diagonal)");
        sigman = smallest_singular_by_solves(l);
    }
    if (!(sigman > 0.0) || !std::isfinite(sigman))
        throw numeric_error("cond_from_factor: smallest singular value underflowed");
    return 2.0 * (std::log(sigma1) - std::log(sigman));
}

}  // namespace steinlab
