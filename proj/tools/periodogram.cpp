#include "periodogram.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "utfsr/lti.hpp"

namespace utfsr::cli {

namespace {

struct Plan {
    Plan(int n, double* in, fftw_complex* out) : handle(fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE)) {}
    ~Plan() { fftw_destroy_plan(handle); }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    fftw_plan handle;
};

}  // namespace

SpectralDensity averaged_periodogram(const Eigen::MatrixXd& samples, const FrequencyGrid& grid) {
    const auto n = samples.rows();
    const auto len = static_cast<Eigen::Index>(grid.size());
    const Eigen::Index segments = samples.cols() / len;
    if (n == 0 || segments == 0) {
        throw std::invalid_argument("need at least " + std::to_string(len) + " samples for grid size " +
                                    std::to_string(len));
    }
    const std::size_t half = grid.size() / 2 + 1;

    Eigen::VectorXd window(len);
    for (Eigen::Index t = 0; t < len; ++t)
        window(t) = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(len));
    const double norm = window.squaredNorm() * static_cast<double>(segments);

    const Eigen::VectorXd mean = samples.rowwise().mean();
    std::vector<double> in(grid.size());
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * half));
    Plan plan(static_cast<int>(len), in.data(), out);

    std::vector<Eigen::MatrixXcd> acc(half, Eigen::MatrixXcd::Zero(n, n));
    Eigen::MatrixXcd spectra(n, static_cast<Eigen::Index>(half));
    for (Eigen::Index s = 0; s < segments; ++s) {
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index t = 0; t < len; ++t) in[static_cast<std::size_t>(t)] = (samples(a, s * len + t) - mean(a)) * window(t);
            fftw_execute(plan.handle);
            for (std::size_t k = 0; k < half; ++k) spectra(a, static_cast<Eigen::Index>(k)) = Complex(out[k][0], out[k][1]);
        }
        for (std::size_t k = 0; k < half; ++k) {
            const auto col = spectra.col(static_cast<Eigen::Index>(k));
            acc[k] += col * col.adjoint();
        }
    }
    fftw_free(out);
    for (std::size_t k = 0; k < half; ++k) {
        acc[k] /= norm;
        acc[k] = (0.5 * (acc[k] + acc[k].adjoint())).eval();
        if (k == 0 || k == half - 1) acc[k] = acc[k].real().cast<Complex>();
    }
    return SpectralDensity::from_half_grid(grid, std::move(acc));
}

SpectralDensity bartlett_smooth(const SpectralDensity& density, std::size_t max_lag) {
    const CovarianceSequence cov = covariances_from_psd(density, max_lag);
    const FrequencyGrid& grid = density.grid();
    const std::size_t half = grid.size() / 2 + 1;
    std::vector<Eigen::MatrixXcd> out(half);
    for (std::size_t k = 0; k < half; ++k) {
        const double w = grid.omega(k);
        Eigen::MatrixXcd s = cov.at(0).cast<Complex>();
        for (std::size_t tau = 1; tau <= max_lag; ++tau) {
            const double taper = 1.0 - static_cast<double>(tau) / static_cast<double>(max_lag + 1);
            const Complex phase = std::polar(taper, -w * static_cast<double>(tau));
            const Eigen::MatrixXd r = cov.at(static_cast<long>(tau));
            s += phase * r.cast<Complex>() + std::conj(phase) * r.transpose().cast<Complex>();
        }
        s = (0.5 * (s + s.adjoint())).eval();
        if (k == 0 || k == half - 1) s = s.real().cast<Complex>();
        out[k] = std::move(s);
    }
    return SpectralDensity::from_half_grid(grid, std::move(out));
}

}  // namespace utfsr::cli
