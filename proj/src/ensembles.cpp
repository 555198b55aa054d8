#include "steinlab/ensembles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <bit>
#include <cmath>

namespace steinlab {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Row-major fill keeps the variate order independent of storage layout.
RealMatrix draw_gaussian(int rows, int cols, RandomStream& stream) {
    RealMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = stream.next_gaussian();
    return m;
}

struct StableDraw {
    RealMatrix a;                    // accepted stable advance matrix
    RealMatrix b;                    // companion draw of B variates
    std::vector<Complex> eigenvalues;
};

// Draw (A, B) with sqrt(n+2) A and B iid N(0,1) until A is stable. B is
// redrawn alongside A so every attempt consumes the same variate layout.
StableDraw draw_stable_generic(int n, int b_cols, RandomStream& stream, int max_rejections,
                               int& rejections) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n) + 2.0);
    for (;;) {
        RealMatrix a = scale * draw_gaussian(n, n, stream);
        RealMatrix b = draw_gaussian(n, b_cols, stream);
        Eigen::EigenSolver<RealMatrix> es(a, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success)
            throw numeric_error("sampler: eigenvalue computation failed");
        const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
        if (radius < 1.0) {
            StableDraw out;
            out.a = std::move(a);
            out.b = std::move(b);
            out.eigenvalues.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                out.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
            return out;
        }
        if (++rejections > max_rejections)
            throw numeric_error("sampler: rejection limit exceeded (pathological configuration)");
    }
}

void bump_rejections(int& rejections, int max_rejections) {
    if (++rejections > max_rejections)
        throw numeric_error("sampler: rejection limit exceeded (pathological configuration)");
}

}  // namespace

void CompanionSpec::validate() const {
    if (c.size() < 0) throw input_error("companion spec: bad coefficient vector");
    if (gamma != 0 && gamma != 1) throw input_error("companion spec: gamma must be 0 or 1");
    if (gamma == 1) {
        if (n() < 3) throw input_error("companion spec: gamma = 1 needs n >= 3");
        if (p <= 1 || p > n() - 1)
            throw input_error("companion spec: p must satisfy 1 < p <= n-1");
    }
}

std::string to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::Generic: return "generic";
        case EnsembleKind::NormalDiag: return "normal-diag";
        case EnsembleKind::CompanionRandomB: return "companion-random-b";
        case EnsembleKind::CompanionAr: return "companion-ar";
        case EnsembleKind::ArObservability: return "ar-observability";
        case EnsembleKind::Jordan: return "jordan";
    }
    return "unknown";
}

EnsembleKind ensemble_kind_from_string(const std::string& name) {
    if (name == "generic") return EnsembleKind::Generic;
    if (name == "normal-diag") return EnsembleKind::NormalDiag;
    if (name == "companion-random-b") return EnsembleKind::CompanionRandomB;
    if (name == "companion-ar") return EnsembleKind::CompanionAr;
    if (name == "ar-observability") return EnsembleKind::ArObservability;
    if (name == "jordan") return EnsembleKind::Jordan;
    throw input_error("unknown ensemble kind: " + name);
}

void EnsembleSpec::validate() const {
    if (n < 1) throw input_error("ensemble spec: n must be >= 1");
    if (count < 1) throw input_error("ensemble spec: count must be >= 1");
    if (kind == EnsembleKind::Generic) {
        if (d < 1 || d > n) throw input_error("ensemble spec: need 1 <= d <= n");
    } else if (d != 1) {
        throw input_error("ensemble spec: kinds other than generic require d = 1");
    }
    if (kind == EnsembleKind::Jordan && !(jordan_lambda > 0.0 && jordan_lambda < 1.0))
        throw input_error("ensemble spec: jordan lambda must lie in (0,1)");
    if ((kind == EnsembleKind::CompanionRandomB || kind == EnsembleKind::CompanionAr ||
         kind == EnsembleKind::ArObservability) &&
        n <= 2)
        throw input_error("ensemble spec: companion kinds require n > 2");
}

SampleDraw sample_generic(int n, int d, RandomStream& stream, int max_rejections) {
    if (n < 1 || d < 1 || d > n) throw input_error("sample_generic: need 1 <= d <= n");
    int rejections = 0;
    for (;;) {
        StableDraw draw = draw_stable_generic(n, d, stream, max_rejections, rejections);
        InputPair pair{draw.a.cast<Complex>(), draw.b.cast<Complex>()};
        if (controllability_check(pair)) return {std::move(pair), rejections, {}};
        bump_rejections(rejections, max_rejections);
    }
}

SampleDraw sample_normal_diag(int n, RandomStream& stream, int max_rejections) {
    if (n < 1) throw input_error("sample_normal_diag: need n >= 1");
    int rejections = 0;
    for (;;) {
        StableDraw draw = draw_stable_generic(n, 1, stream, max_rejections, rejections);
        ComplexMatrix a = ComplexMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) a(i, i) = draw.eigenvalues[static_cast<std::size_t>(i)];
        bool b_ok = true;
        for (int i = 0; i < n; ++i)
            if (draw.b(i, 0) == 0.0) b_ok = false;
        InputPair pair{std::move(a), draw.b.cast<Complex>()};
        if (b_ok && controllability_check(pair)) return {std::move(pair), rejections, {}};
        bump_rejections(rejections, max_rejections);
    }
}

SampleDraw sample_companion(int n, CompanionBMode mode, RandomStream& stream,
                            int max_rejections) {
    if (n <= 2) throw input_error("sample_companion: need n > 2");
    int rejections = 0;
    for (;;) {
        StableDraw draw = draw_stable_generic(n, 1, stream, max_rejections, rejections);
        CompanionSpec spec = charpoly_from_spectrum(Spectrum(draw.eigenvalues));
        ComplexMatrix a_c = build_companion(spec);

        InputPair pair;
        bool accepted = false;
        switch (mode) {
            case CompanionBMode::Random:
                pair = {a_c, draw.b.cast<Complex>()};
                accepted = controllability_check(pair);
                break;
            case CompanionBMode::E1: {
                ComplexMatrix b = ComplexMatrix::Zero(n, 1);
                b(0, 0) = 1.0;
                pair = {a_c, std::move(b)};
                accepted = controllability_check(pair);
                break;
            }
            case CompanionBMode::ArObservability:
                // Observability Grammian of the AR model: adjoint advance
                // matrix driven by the first row of A_c. These pairs are
                // controllable for generic spectra but sit so close to the
                // uncontrollable set that a finite-precision rank test would
                // reject them wholesale, so only the structural guard applies.
                pair = {a_c.adjoint(), a_c.row(0).transpose()};
                accepted = std::abs(spec.c0) > 0.0;
                break;
        }
        if (accepted) {
            SampleDraw out{std::move(pair), rejections, {}};
            out.companion = std::move(spec);
            return out;
        }
        bump_rejections(rejections, max_rejections);
    }
}

SampleDraw sample_jordan(double lambda, int n, RandomStream& stream, int max_rejections) {
    ComplexMatrix j = build_jordan(Complex(lambda, 0.0), n);
    int rejections = 0;
    for (;;) {
        RealMatrix b = draw_gaussian(n, 1, stream);
        // (J, B) is controllable iff the leading component of B is nonzero.
        if (b(0, 0) != 0.0) return {{j, b.cast<Complex>()}, rejections, {}};
        bump_rejections(rejections, max_rejections);
    }
}

SampleDraw draw_sample(const EnsembleSpec& spec, int index) {
    spec.validate();
    std::uint64_t salt = mix64(static_cast<std::uint64_t>(spec.kind)) ^
                         mix64((static_cast<std::uint64_t>(spec.n) << 20) ^
                               static_cast<std::uint64_t>(spec.d));
    if (spec.kind == EnsembleKind::Jordan)
        salt ^= mix64(std::bit_cast<std::uint64_t>(spec.jordan_lambda));
    RandomStream stream(spec.seed, salt, static_cast<std::uint64_t>(index));

    switch (spec.kind) {
        case EnsembleKind::Generic: return sample_generic(spec.n, spec.d, stream);
        case EnsembleKind::NormalDiag: return sample_normal_diag(spec.n, stream);
        case EnsembleKind::CompanionRandomB:
            return sample_companion(spec.n, CompanionBMode::Random, stream);
        case EnsembleKind::CompanionAr:
            return sample_companion(spec.n, CompanionBMode::E1, stream);
        case EnsembleKind::ArObservability:
            return sample_companion(spec.n, CompanionBMode::ArObservability, stream);
        case EnsembleKind::Jordan:
            return sample_jordan(spec.jordan_lambda, spec.n, stream);
    }
    throw input_error("draw_sample: unknown ensemble kind");
}

ComplexMatrix build_companion(const CompanionSpec& spec) {
    spec.validate();
    const Eigen::Index n = spec.n();
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j + 1 < n; ++j) a(0, j) = -std::conj(spec.c(j));
    a(0, n - 1) = -std::conj(spec.c0);
    for (Eigen::Index i = 0; i + 1 < n; ++i) a(i + 1, i) = 1.0;
    if (spec.gamma == 1) a(spec.p, spec.p - 1) = 0.0;  // Pi_{n-1} zeroes e_p
    return a;
}

CompanionSpec charpoly_from_spectrum(const Spectrum& spectrum) {
    const std::size_t n = spectrum.size();
    // Ascending coefficients of prod (x - lambda_i); leading coefficient 1.
    std::vector<Complex> q(n + 1, Complex(0.0, 0.0));
    q[0] = 1.0;
    std::size_t degree = 0;
    for (const Complex& root : spectrum.eigenvalues()) {
        ++degree;
        for (std::size_t j = degree; j > 0; --j) q[j] = q[j - 1] - root * q[j];
        q[0] *= -root;
    }
    // q[j] now holds the coefficient of x^j, with q[n] = 1.

    CompanionSpec spec;
    spec.c0 = n == 0 ? Complex(0, 0) : std::conj(q[0]);
    spec.c = ComplexVector(static_cast<Eigen::Index>(n == 0 ? 0 : n - 1));
    for (std::size_t i = 1; i < n; ++i)
        spec.c(static_cast<Eigen::Index>(i - 1)) = std::conj(q[n - i]);
    spec.gamma = 0;
    return spec;
}

ComplexMatrix build_jordan(Complex lambda0, int n) {
    if (n < 1) throw input_error("build_jordan: need n >= 1");
    const double m = std::abs(lambda0);
    if (!(m > 0.0 && m < 1.0))
        throw input_error("build_jordan: |lambda0| must lie in (0, 1)");
    ComplexMatrix j = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) j(i, i) = lambda0;
    for (int i = 1; i < n; ++i) j(i, i - 1) = 1.0;
    return j;
}

bool controllability_check(const InputPair& pair, double tol) {
    pair.validate();
    const Eigen::Index n = pair.n();
    const Eigen::Index d = pair.d();
    ComplexMatrix block(n, n * d);
    ComplexMatrix power = pair.b;
    for (Eigen::Index k = 0; k < n; ++k) {
        block.middleCols(k * d, d) = power;
        if (k + 1 < n) power = (pair.a * power).eval();
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(block);
    const double smax = svd.singularValues()(0);
    if (smax == 0.0) return false;
    return svd.singularValues()(svd.singularValues().size() - 1) > tol * smax;
}

}  // namespace steinlab
