#include "utfsr/lti.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dft.hpp"
#include "utfsr/errors.hpp"
#include "utfsr/spectral.hpp"

namespace utfsr {

LaurentPolynomial::LaurentPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficient is not finite");
    }
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

LaurentPolynomial LaurentPolynomial::constant(double value) {
    return LaurentPolynomial(std::vector<double>{value});
}

LaurentPolynomial LaurentPolynomial::delay(std::size_t lag, double gain) {
    std::vector<double> c(lag + 1, 0.0);
    c[lag] = gain;
    return LaurentPolynomial(std::move(c));
}

double LaurentPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Complex LaurentPolynomial::evaluate(double omega) const {
    // Horner in w = e^{-i omega}.
    const Complex w = std::polar(1.0, -omega);
    Complex acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
    return acc;
}

RationalTransfer::RationalTransfer(LaurentPolynomial num, LaurentPolynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.coeff(0) != 1.0) {
        throw std::invalid_argument("denominator must have constant coefficient 1");
    }
}

RationalTransfer RationalTransfer::gain(double value) {
    return RationalTransfer(LaurentPolynomial::constant(value));
}

RationalTransfer RationalTransfer::delayed_gain(double value, std::size_t lag) {
    return RationalTransfer(LaurentPolynomial::delay(lag, value));
}

std::size_t RationalTransfer::max_lag() const { return std::max(num_.degree(), den_.degree()); }

Complex RationalTransfer::evaluate(double omega) const {
    return num_.evaluate(omega) / den_.evaluate(omega);
}

FrequencyGrid::FrequencyGrid(std::size_t size) : size_(size) {
    if (size < 2 || !std::has_single_bit(size)) {
        throw std::invalid_argument("grid size must be a power of two >= 2, got " +
                                    std::to_string(size));
    }
}

double FrequencyGrid::omega(std::size_t k) const {
    return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(size_);
}

ComplexMatrixField::ComplexMatrixField(std::vector<Eigen::MatrixXcd> values)
    : values_(std::move(values)) {
    if (values_.empty()) return;
    const auto rows = values_.front().rows();
    for (const auto& m : values_) {
        if (m.rows() != rows || m.cols() != rows) {
            throw std::invalid_argument("field matrices must be square with identical dimensions");
        }
    }
}

CovarianceSequence::CovarianceSequence(std::vector<Eigen::MatrixXd> nonnegative_lags)
    : lags_(std::move(nonnegative_lags)) {
    if (lags_.empty()) throw std::invalid_argument("covariance sequence needs at least lag 0");
    const auto n = lags_.front().rows();
    for (const auto& r : lags_) {
        if (r.rows() != n || r.cols() != n) {
            throw std::invalid_argument("covariance matrices must share one square shape");
        }
    }
    const Eigen::MatrixXd& r0 = lags_.front();
    const double tol = 1e-9 * std::max(1.0, r0.cwiseAbs().maxCoeff());
    if ((r0 - r0.transpose()).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("R(0) is not symmetric");
    }
}

Eigen::MatrixXd CovarianceSequence::at(long tau) const {
    const auto lag = static_cast<std::size_t>(std::abs(tau));
    if (lag > max_lag()) throw std::out_of_range("lag beyond stored covariance range");
    return tau >= 0 ? lags_[lag] : Eigen::MatrixXd(lags_[lag].transpose());
}

double CovarianceSequence::entry(Eigen::Index a, Eigen::Index b, long tau) const {
    const auto lag = static_cast<std::size_t>(std::abs(tau));
    if (lag > max_lag()) throw std::out_of_range("lag beyond stored covariance range");
    return tau >= 0 ? lags_[lag](a, b) : lags_[lag](b, a);
}

std::vector<Complex> eval_on_grid(const RationalTransfer& t, const FrequencyGrid& grid) {
    std::vector<Complex> out(grid.size());
    const double floor = 1e-12 * t.den().max_abs_coeff();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid.omega(k);
        const Complex d = t.den().evaluate(w);
        if (std::abs(d) < floor) throw DenominatorVanishes(k);
        out[k] = t.num().evaluate(w) / d;
    }
    return out;
}

ComplexMatrixField matrix_inverse_field(const ComplexMatrixField& field) {
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(field.size());
    for (std::size_t k = 0; k < field.size(); ++k) {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(field[k]);
        if (!(lu.rcond() >= 1e-12)) throw SingularAtFrequency(k);
        out.push_back(lu.inverse());
    }
    return ComplexMatrixField(std::move(out));
}

CovarianceSequence covariances_from_psd(const SpectralDensity& density, std::size_t max_lag) {
    const std::size_t grid = density.grid().size();
    if (max_lag > grid / 4) {
        throw std::invalid_argument("max lag " + std::to_string(max_lag) +
                                    " exceeds a quarter of the grid size");
    }
    const auto n = density.dim();
    const auto roots = detail::unit_roots(grid);
    const double norm = 1.0 / static_cast<double>(grid);

    std::vector<Eigen::MatrixXd> lags;
    lags.reserve(max_lag + 1);
    double worst_imag = 0.0;
    for (std::size_t tau = 0; tau <= max_lag; ++tau) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t k = 0; k < grid; ++k) acc += density.at(k) * roots[(k * tau) % grid];
        acc *= norm;
        worst_imag = std::max(worst_imag, acc.imag().cwiseAbs().maxCoeff());
        lags.emplace_back(acc.real());
    }
    const double reference = std::max(lags.front().cwiseAbs().maxCoeff(), 1e-300);
    if (worst_imag > 1e-8 * reference) {
        throw ResolutionTooCoarse("covariance extraction left an imaginary residue of " +
                                  std::to_string(worst_imag / reference) + " (relative)");
    }
    // Symmetrize R(0) against round-off.
    lags.front() = 0.5 * (lags.front() + lags.front().transpose()).eval();
    return CovarianceSequence(std::move(lags));
}

}  // namespace utfsr
