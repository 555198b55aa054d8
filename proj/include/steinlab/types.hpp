#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace steinlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Malformed input: bad dimensions, unreadable files, violated preconditions.
/// The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure: non-convergence, loss of positivity, singular systems.
/// The CLI maps this to exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Values of ln(kappa) above this are not trustworthy in double precision
/// (the smallest singular values of the Cholesky factor fall below the
/// round-off floor of kappa(L)^2 arithmetic); table cells past it are flagged.
inline constexpr double kLogKappaTrustCeiling = 69.0;

inline bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

/// A discrete-time state-space input pair: advance matrix `a` (n x n) and
/// input matrix `b` (n x d) with 1 <= d <= n.
struct InputPair {
    ComplexMatrix a;
    ComplexMatrix b;

    Eigen::Index n() const { return a.rows(); }
    Eigen::Index d() const { return b.cols(); }

    void validate() const {
        if (a.rows() == 0 || a.rows() != a.cols())
            throw input_error("input pair: advance matrix must be square and nonempty");
        if (b.rows() != a.rows())
            throw input_error("input pair: b must have the same row count as a");
        if (b.cols() < 1 || b.cols() > a.rows())
            throw input_error("input pair: input dimension must satisfy 1 <= d <= n");
        if (!all_finite(a) || !all_finite(b))
            throw input_error("input pair: entries must be finite");
    }
};

/// Continuous-time pair (image of a discrete pair under the Cayley map);
/// stability means spectrum in the open left half-plane.
struct ContinuousPair {
    ComplexMatrix a;
    ComplexMatrix b;
};

/// Eigenvalue list ordered by non-increasing modulus.
class Spectrum {
  public:
    Spectrum() = default;

    explicit Spectrum(std::vector<Complex> values) : eigenvalues_(std::move(values)) {
        sort_values();
    }

    static Spectrum from_matrix(const ComplexMatrix& a);

    const std::vector<Complex>& eigenvalues() const { return eigenvalues_; }
    std::size_t size() const { return eigenvalues_.size(); }
    bool empty() const { return eigenvalues_.empty(); }

    double spectral_radius() const {
        return eigenvalues_.empty() ? 0.0 : std::abs(eigenvalues_.front());
    }
    double min_modulus() const {
        return eigenvalues_.empty() ? 0.0 : std::abs(eigenvalues_.back());
    }
    bool stable() const { return spectral_radius() < 1.0; }

    /// Sum of ln|lambda_i| over all eigenvalues (-inf if any vanishes).
    double log_abs_product() const;

    Eigen::VectorXcd as_vector() const {
        Eigen::VectorXcd v(static_cast<Eigen::Index>(eigenvalues_.size()));
        for (std::size_t i = 0; i < eigenvalues_.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = eigenvalues_[i];
        return v;
    }

  private:
    void sort_values();

    std::vector<Complex> eigenvalues_;
};

}  // namespace steinlab
