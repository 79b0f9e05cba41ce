#pragma once

#include <Eigen/Dense>

#include "utfsr/spectral.hpp"

namespace utfsr::cli {

/// Averaged periodogram over non-overlapping Hann-windowed segments of length
/// grid.size(). Sample means are removed per channel first.
/// @throws std::invalid_argument if fewer than one full segment is available.
SpectralDensity averaged_periodogram(const Eigen::MatrixXd& samples, const FrequencyGrid& grid);

/// Bartlett lag-window smoothing: keeps covariances up to max_lag, tapered by
/// 1 - |tau| / (max_lag + 1). The result stays positive semidefinite.
SpectralDensity bartlett_smooth(const SpectralDensity& density, std::size_t max_lag);

}  // namespace utfsr::cli
