#include "utfsr/spectral.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace utfsr {

SpectralDensity::SpectralDensity(FrequencyGrid grid, ComplexMatrixField values)
    : grid_(grid), values_(std::move(values)) {
    const std::size_t n_grid = grid_.size();
    if (values_.size() != n_grid) {
        throw std::invalid_argument("density has " + std::to_string(values_.size()) +
                                    " samples for a grid of " + std::to_string(n_grid));
    }
    if (values_.dim() == 0) throw std::invalid_argument("density must have at least one channel");

    for (const auto& m : values_.values()) scale_ = std::max(scale_, m.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * std::max(1.0, scale_);

    for (std::size_t k = 0; k < n_grid; ++k) {
        const Eigen::MatrixXcd& s = values_[k];
        if ((s - s.adjoint()).cwiseAbs().maxCoeff() > tol) {
            throw std::invalid_argument("density is not Hermitian at grid index " + std::to_string(k));
        }
        const std::size_t mirror = (n_grid - k) % n_grid;
        if ((values_[mirror] - s.conjugate()).cwiseAbs().maxCoeff() > tol) {
            throw std::invalid_argument("density breaks conjugate symmetry at grid index " +
                                        std::to_string(k));
        }
        const Eigen::MatrixXcd h = 0.5 * (s + s.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
        const double trace = h.trace().real();
        if (eig.eigenvalues().minCoeff() < -1e-9 * std::max(trace, 1e-300)) {
            throw std::invalid_argument("density is not positive semidefinite at grid index " +
                                        std::to_string(k));
        }
    }
}

SpectralDensity SpectralDensity::from_half_grid(FrequencyGrid grid, std::vector<Eigen::MatrixXcd> half) {
    const std::size_t n_grid = grid.size();
    if (half.size() != n_grid / 2 + 1) {
        throw std::invalid_argument("half grid needs N/2+1 = " + std::to_string(n_grid / 2 + 1) +
                                    " samples, got " + std::to_string(half.size()));
    }
    std::vector<Eigen::MatrixXcd> full(n_grid);
    for (std::size_t k = 0; k <= n_grid / 2; ++k) full[k] = half[k];
    for (std::size_t k = n_grid / 2 + 1; k < n_grid; ++k) full[k] = half[n_grid - k].conjugate();
    return SpectralDensity(grid, ComplexMatrixField(std::move(full)));
}

}  // namespace utfsr
