#pragma once

#include <functional>
#include <string>

#include "steinlab/types.hpp"

namespace steinlab {

/// Scalar stationary forcing model: autocovariance phi_k plus the extremes
/// of its spectral density. ar1/ma1/white have closed-form extremes;
/// custom models must supply them (they are not estimated numerically).
struct NoiseModel {
    enum class Kind { White, Ar1, Ma1, Custom };

    Kind kind = Kind::White;
    double param = 0.0;  ///< coefficient a with |a| < 1 (ar1/ma1)
    double s_min = 1.0;
    double s_max = 1.0;
    std::function<double(int)> autocov;  ///< phi_k for k >= 0

    static NoiseModel white(double phi0 = 1.0);
    static NoiseModel ar1(double a);  ///< x_t = a x_{t-1} + e_t, unit innovations
    static NoiseModel ma1(double a);  ///< x_t = e_t + a e_{t-1}
    static NoiseModel custom(std::function<double(int)> autocov, double s_min, double s_max);

    double phi(int k) const { return autocov ? autocov(k) : 0.0; }
    std::string kind_name() const;
};

/// State covariance W = lim_t M_t Phi_t M_t* for scalar forcing (d = 1),
/// where M_t = (B, AB, ..., A^{t-1} B) and Phi_t is the autocovariance
/// Toeplitz matrix. The horizon doubles until the Frobenius increment
/// falls below tol * ||W||_F.
ComplexMatrix state_covariance_colored(const InputPair& pair, const NoiseModel& noise,
                                       double tol = 1e-12);

struct ColoredBoundCheck {
    double lhs = 0.0;  ///< ln kappa(W)
    double rhs = 0.0;  ///< ln kappa(P) + ln(S_max / S_min)
};

/// The conditioning sandwich kappa(W) <= kappa(P) S_max / S_min.
ColoredBoundCheck colored_condition_bound(const InputPair& pair, const NoiseModel& noise);

struct SandwichCheck {
    double lhs = 0.0;  ///< kappa(M Phi M*)
    double rhs = 0.0;  ///< kappa(Phi) kappa(M)^2
};

/// kappa(M Phi M*) <= kappa(Phi) kappa(M)^2 for Hermitian positive definite
/// Phi and full-row-rank M (r x n, r <= n).
SandwichCheck sandwich_lemma_check(const ComplexMatrix& phi, const ComplexMatrix& m);

}  // namespace steinlab
