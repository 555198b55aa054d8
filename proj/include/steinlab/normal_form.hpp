#pragma once

#include "steinlab/stein.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

/// Result of transforming (A, B) to input-normal coordinates: T = L^{-1}
/// for the Cholesky factor L of the Grammian, A~ = T A T^{-1}, B~ = T B,
/// and A~ A~* + B~ B~* = I up to round-off.
struct InTransform {
    ComplexMatrix t;
    ComplexMatrix a_tilde;
    ComplexMatrix b_tilde;
    double log_kappa_t = 0.0;  ///< ln kappa(T) = ln kappa(P) / 2
};

/// Transform a controllable stable pair to input-normal form. A second
/// factored solve in the transformed coordinates polishes the factor, so
/// the normal identity holds to ~eps*n even when kappa(P) is large.
InTransform to_input_normal(const InputPair& pair);

/// ||A~ A~* + B~ B~* - I||_F, the defect of the input-normal identity.
double input_normal_residual(const InputPair& pair);

/// Given a stable A with sigma_1(A) = 1 (within tol), build B such that
/// I - A A* = B B*. Columns are sqrt(1 - mu_j) v_j over the eigenpairs
/// (mu_j, v_j) of A A* with mu_j < 1 - tol, ordered by ascending mu_j.
ComplexMatrix in_complete(const ComplexMatrix& a, double tol = 1e-6);

/// Unit-disk Moebius map of the pair:
///   A^ = (I - conj(w) A)^{-1} (A - w I),
///   B^ = sqrt(1 - |w|^2) (I - conj(w) A)^{-1} B,
/// which maps stable pairs to stable pairs and leaves the Grammian fixed.
InputPair bilinear_transform(const InputPair& pair, Complex w);

/// Cayley bridge to continuous time: A^ = (A + I)^{-1} (A - I),
/// B^ = sqrt(2) (I + A)^{-1} B; the discrete Grammian P then satisfies
/// A^ P + P A^* = -B^ B^*.
ContinuousPair cayley(const InputPair& pair);

/// For an input-normal pair, sigma_1(A^k) = 1 whenever k d < n. Returns
/// max_k |sigma_1(A^k) - 1| over 1 <= k, k d < n (0 when the range is
/// empty). Throws input_error if the pair is not input normal within
/// `in_tol` (default 1e-8 * n).
double verify_power_identity(const InputPair& in_pair, double in_tol = -1.0);

}  // namespace steinlab
