#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "steinlab/ensembles.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

/// Finite stand-in for ln(0) when a bound degenerates (e.g. Penzl at
/// kappa_hat = 1); roughly the log of the smallest positive double.
inline constexpr double kLogFloor = -745.0;

/// Named lower bounds on ln kappa(P) for one input pair. Every entry is a
/// natural log of a kappa(P) bound; `applicable` lists the names whose
/// hypotheses the pair satisfies.
struct BoundReport {
    std::map<std::string, double> entries;
    std::set<std::string> applicable;
};

/// Spectral data of a companion matrix: Gamma = 1 + |c0|^2 + ||c||^2,
/// omega = |c0|^2 + gamma |c_p|^2, and the two roots mu+- of
/// mu^2 - Gamma mu + omega = 0 (so sqrt(mu+-) are singular values of A_c).
struct CompanionSpectralData {
    double gamma_big = 0.0;
    double omega = 0.0;
    double mu_plus = 0.0;
    double mu_minus = 0.0;
};

struct CompanionSingularValues {
    CompanionSpectralData data;
    std::vector<double> singular_values;  ///< all n values, descending
};

/// Continued-fraction bracketing of mu+ :
///   1 + ||Pi c||^2 <= Gamma - omega/(Gamma - omega) <= mu+
///                  <= Gamma - omega/(Gamma - omega/Gamma) <= Gamma.
struct CompanionBound {
    double log_mu_plus = 0.0;
    double chain_lower_0 = 0.0;  ///< 1 + ||Pi_{n-1} c||^2
    double chain_lower_1 = 0.0;  ///< Gamma - omega / (Gamma - omega)
    double chain_upper_1 = 0.0;  ///< Gamma - omega / (Gamma - omega/Gamma)
    double chain_upper_0 = 0.0;  ///< Gamma
};

struct JordanBound {
    double strong = 0.0;  ///< 2 [ln(1/n) + (n-1) ln((1 - 1/n)/(1 - |l0|))]
    double weak = 0.0;    ///< 2 [-1 - ln n + (n-1) ln(1/(1 - |l0|))]
};

/// Low-rank ADI state: P^(k) = factor factor* with rank <= k d.
struct AdiState {
    std::vector<Complex> shifts;
    ComplexMatrix factor;  ///< n x (k d)
    int k = 0;
};

/// ln of the transformation bound for stable invertible A:
///   kappa(T) >= max{ sigma_1(A), 1/sigma_1(A),
///                    sigma_n(A) / prod|lambda_i|^{1/d},
///                    sigma_n(A') / sigma_n(A) }.
/// The last term needs the realized input-normal matrix, so it is included
/// only when sigma_n_prime is supplied. Doubling the result bounds
/// ln kappa(P).
double trans_bound(const ComplexMatrix& a, int d,
                   std::optional<double> sigma_n_prime = std::nullopt);

/// ln of the kappa(P) lower bound for normal A. For d = 1 this is the
/// simplified form 1 / prod_{i<n} |lambda_i|^2; for 1 < d < n the max of
/// the general terms (the sigma_n(A') term only when supplied).
double normal_bound(const Spectrum& spectrum, int d,
                    std::optional<double> sigma_n_prime = std::nullopt);

/// ln kappa(P) >= -2 k ln sigma_1(A) with k = floor((n-1)/d); vacuous
/// (non-positive) when sigma_1 >= 1, but still reported.
double power_bound(double sigma1, int n, int d);

CompanionSingularValues companion_singular_values(const CompanionSpec& spec);

/// ln mu+ (a kappa(P) lower bound for any stable controllable companion
/// pair, and for its adjoint), with the continued-fraction chain attached.
CompanionBound companion_bound(const CompanionSpec& spec);

/// ln( prod (1 + lambda_i)^2 / (n+1) - prod lambda_i^2 ) for positive real
/// spectra; a weaker explicit version of the companion bound.
double companion_positive_bound(const Spectrum& spectrum);

/// Both forms of the Jordan-block bound on ln kappa(P) for d = 1.
JordanBound jordan_bound(Complex lambda0, int n);

/// ln max over the grid of (|z| - 1)/sigma_n(z I - A), a resolvent lower
/// bound on ln kappa(T); doubling it bounds ln kappa(P). Grid points that
/// hit an eigenvalue evaluate to +infinity.
double kreiss_lower(const ComplexMatrix& a, const std::vector<Complex>& grid);

/// Default evaluation grid: 64 phases x 16 log-spaced radii in (1, 2].
std::vector<Complex> kreiss_default_grid();

/// The analytic peak |z0| = (n - |lambda0|)/(n - 1) (phase of lambda0)
/// used for Jordan blocks.
Complex kreiss_jordan_point(Complex lambda0, int n);

/// ln[ min_k |f(lambda_k, w)|^2 / prod_i |f(lambda_i, w)|^{2/d} ] with the
/// disk automorphism f(z, w) = (z - w)/(1 - conj(w) z); reduces to the
/// normal bound at w = 0.
double frac_normal_bound(const Spectrum& spectrum, Complex w, int d);

/// Coarse 33 x 33 grid over the disk followed by local refinement.
struct FracOptimum {
    Complex w;
    double value = 0.0;
};
FracOptimum optimize_frac_normal(const Spectrum& spectrum, int d);

/// ln kappa(P) >= -2 k ln( rho / (1 - |x| rho - rho^2) ) when all
/// eigenvalues of normal A lie in the disk |z - x| < rho, |x| + rho < 1,
/// and k d < n.
double disk_bound(Complex x, double rho, int k);

/// Low-rank shifted ADI on the continuous equation A P + P A* = -B B*,
/// starting from P^(0) = 0. Shifts must lie in the open left half-plane.
AdiState adi_iterate(const ContinuousPair& pair, const std::vector<Complex>& shifts);

/// ln of Penzl's decay bound ( prod_j (k^{(2j+1)/2k} - 1)/(k^{(2j+1)/2k} + 1) )^2
/// on lambda_{kd+1}(P)/lambda_1(P) for real symmetric stable continuous A.
double penzl_bound(double kappa_hat, int k);

/// Geometric shift ladder on [-b, -a] (0 < a <= b) used in Penzl's proof.
std::vector<Complex> penzl_shifts(double a, double b, int k);

struct DecayCheck {
    double lhs = 0.0;  ///< lambda_{kd+1}(P) / lambda_1(P)
    double rhs = 0.0;  ///< ||P - P^(k)||_2 / ||P||_2 (spectral norm)
};

/// Eigenvalue decay of the solved Grammian against the rank-kd ADI
/// approximant; the contract lhs <= rhs + 1e-9 holds for any shifts.
DecayCheck adi_decay_check(const InputPair& pair, int k, const std::vector<Complex>& shifts);

/// Evaluate every bound whose hypotheses the pair satisfies.
BoundReport evaluate_bounds(const InputPair& pair);

/// Bounds computable from a spectrum alone (normal A assumed), including
/// the companion realization of that spectrum.
BoundReport evaluate_bounds(const Spectrum& spectrum, int d);

/// Jordan-block report for J(lambda0) with d = 1.
BoundReport evaluate_bounds_jordan(Complex lambda0, int n);

}  // namespace steinlab
