#include "steinlab/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace steinlab {

Spectrum Spectrum::from_matrix(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw input_error("spectrum: matrix must be square");
    if (a.rows() == 0)
        return Spectrum{};
    Eigen::ComplexEigenSolver<ComplexMatrix> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw numeric_error("spectrum: eigenvalue computation failed");
    std::vector<Complex> values(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        values[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return Spectrum(std::move(values));
}

void Spectrum::sort_values() {
    std::sort(eigenvalues_.begin(), eigenvalues_.end(), [](const Complex& x, const Complex& y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax > ay;
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
}

double Spectrum::log_abs_product() const {
    double sum = 0.0;
    for (const Complex& v : eigenvalues_) {
        const double m = std::abs(v);
        if (m == 0.0) return -std::numeric_limits<double>::infinity();
        sum += std::log(m);
    }
    return sum;
}

}  // namespace steinlab
