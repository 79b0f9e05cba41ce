#pragma once

#include <cstddef>
#include <vector>

#include "utfsr/lti.hpp"

namespace utfsr {

/// Output power spectral density sampled on a full frequency grid.
///
/// Construction checks, at every grid point, that the matrix is Hermitian
/// (to 1e-10 of the field's largest entry), positive semidefinite (smallest
/// eigenvalue >= -1e-9 * trace) and that S(N-k) = conj(S(k)).
class SpectralDensity {
public:
    SpectralDensity(FrequencyGrid grid, ComplexMatrixField values);

    /// Rebuilds the full grid from the half k = 0..N/2 using conjugate symmetry.
    static SpectralDensity from_half_grid(FrequencyGrid grid, std::vector<Eigen::MatrixXcd> half);

    const FrequencyGrid& grid() const { return grid_; }
    const ComplexMatrixField& values() const { return values_; }
    const Eigen::MatrixXcd& at(std::size_t k) const { return values_[k]; }
    Eigen::Index dim() const { return values_.dim(); }

    /// Largest absolute entry over the whole field.
    double scale() const { return scale_; }

private:
    FrequencyGrid grid_;
    ComplexMatrixField values_;
    double scale_ = 0.0;
};

}  // namespace utfsr
