#pragma once

#include <functional>

#include "steinlab/types.hpp"

namespace steinlab {

/// Factored solution of P - A P A* = B B*.
///
/// `factor_l` is lower triangular with real nonnegative diagonal and
/// P = L L*. Condition numbers are always derived from L (kappa(P) equals
/// kappa(L)^2), never from P itself, so the small singular values survive.
struct SteinSolution {
    ComplexMatrix factor_l;
    double log_kappa = 0.0;    ///< ln kappa(P)
    double residual_rel = 0.0; ///< ||P - A P A* - B B*||_F / ||B B*||_F
    int iterations = 0;        ///< doubling steps used
};

/// Dense reference solver via the n^2 x n^2 Kronecker system
/// (I - conj(A) (x) A) vec(P) = vec(B B*). Intended as an oracle; capped
/// at n <= 32. The result is symmetrized.
ComplexMatrix solve_stein_direct(const InputPair& pair);

using DoublingHook = std::function<void(int iteration, const ComplexMatrix& factor)>;

/// Square-root doubling solver. Maintains a triangular factor L_k with
/// L_k L_k* = sum_{j < 2^k} A^j B B* A*^j through the recursion
/// A_{k+1} = A_k^2, L_{k+1} = qr-compress([L_k, A_k L_k]), and stops when
/// the remaining tail falls below `tol` relative to the accumulated sum.
///
/// Throws numeric_error if max_iter doublings do not converge (spectral
/// radius too close to one) or if the final factor loses positivity
/// (numerically uncontrollable pair).
SteinSolution solve_stein_sqrt_doubling(const InputPair& pair, double tol = 1e-16,
                                        int max_iter = 60, const DoublingHook& hook = {});

/// Relative residual ||P - A P A* - B B*||_F / ||B B*||_F for a candidate P.
double stein_residual(const InputPair& pair, const ComplexMatrix& p);

/// ln kappa(P) = 2 (ln sigma_1(L) - ln sigma_n(L)) from a triangular factor.
///
/// Uses a dense SVD while the small singular value is above its round-off
/// floor and switches to triangular-solve power iteration below it, which
/// tracks the graded factors these solvers produce well past 1/eps.
/// Throws numeric_error when the factor is exactly singular.
double cond_from_factor(const ComplexMatrix& l);

}  // namespace steinlab
