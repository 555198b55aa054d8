#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "steinlab/rng.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

/// Parameters of the companion (Frobenius) form
///
///   A_c = [ -c*        -conj(c0) ]
///         [ Pi_{n-1}       0     ]
///
/// with Pi_{n-1} = I - gamma e_p e_p^*; gamma = 0 is the plain companion
/// normal form, gamma = 1 the ARMA-style projected variant (needs n >= 3,
/// 1 < p <= n-1).
struct CompanionSpec {
    Complex c0{0.0, 0.0};
    ComplexVector c;  ///< length n-1
    int gamma = 0;
    int p = 2;  ///< only meaningful when gamma = 1

    Eigen::Index n() const { return c.size() + 1; }
    void validate() const;
};

enum class EnsembleKind {
    Generic,         ///< dense Gaussian A (scaled by 1/sqrt(n+2)) and Gaussian B
    NormalDiag,      ///< diagonal A carrying the spectrum of a generic draw
    CompanionRandomB,///< companion A, Gaussian B
    CompanionAr,     ///< companion A, B = e_1 (autoregressive model)
    ArObservability, ///< (A_c^*, first row of A_c transposed)
    Jordan           ///< single Jordan block, Gaussian B
};

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string& name);

/// Declarative description of a random input-pair distribution.
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::Generic;
    int n = 8;
    int d = 1;
    int count = 1;
    std::uint64_t seed = 0;
    double jordan_lambda = 0.5;  ///< Jordan kind only, in (0,1)

    void validate() const;
};

/// Per-sample statistics carried into the quantile tables.
struct SampleRecord {
    int index = 0;
    double log_kappa = 0.0;
    std::optional<double> bound_log;
    int rejections = 0;
    std::map<std::string, double> aux;
};

struct SampleDraw {
    InputPair pair;
    int rejections = 0;
    std::optional<CompanionSpec> companion;  ///< filled by the companion samplers
};

inline constexpr int kDefaultMaxRejections = 10000;
inline constexpr double kControllabilityTol = 1e-12;

/// Dense Gaussian pair: entries of sqrt(n+2) A and of B are iid N(0,1);
/// draws are rejected until the pair is stable and numerically controllable.
SampleDraw sample_generic(int n, int d, RandomStream& stream,
                          int max_rejections = kDefaultMaxRejections);

/// Diagonal A carrying the eigenvalues of a generic draw (rejected until
/// stable), B an n x 1 Gaussian vector.
SampleDraw sample_normal_diag(int n, RandomStream& stream,
                              int max_rejections = kDefaultMaxRejections);

enum class CompanionBMode { Random, E1, ArObservability };

/// Companion matrix built from the characteristic polynomial of a stable
/// generic spectrum (gamma = 0), with B chosen per mode. ArObservability
/// returns the adjoint pair (A_c^*, A_c[0,:]^t) whose Grammian is the
/// observability Grammian of the autoregressive model.
SampleDraw sample_companion(int n, CompanionBMode mode, RandomStream& stream,
                            int max_rejections = kDefaultMaxRejections);

/// Jordan block J = lambda I + Z with a Gaussian B (d = 1).
SampleDraw sample_jordan(double lambda, int n, RandomStream& stream,
                         int max_rejections = kDefaultMaxRejections);

/// One sample of an ensemble, keyed by (spec.seed, spec fields, index).
SampleDraw draw_sample(const EnsembleSpec& spec, int index);

ComplexMatrix build_companion(const CompanionSpec& spec);

/// Coefficients of prod_i (lambda - lambda_i) arranged so that
/// build_companion of the result (gamma = 0) has exactly that spectrum.
CompanionSpec charpoly_from_spectrum(const Spectrum& spectrum);

/// lambda0 I + Z_n with the lower shift Z; requires 0 < |lambda0| < 1.
ComplexMatrix build_jordan(Complex lambda0, int n);

/// True iff the smallest singular value of (B, AB, ..., A^{n-1} B)
/// exceeds tol times the largest.
bool controllability_check(const InputPair& pair, double tol = kControllabilityTol);

}  // namespace steinlab
