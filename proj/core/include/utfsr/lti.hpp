#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace utfsr {

using Complex = std::complex<double>;

/// Polynomial in the delay operator z^-1. coeffs()[l] multiplies z^-l.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
class LaurentPolynomial {
public:
    LaurentPolynomial() = default;
    explicit LaurentPolynomial(std::vector<double> coeffs);

    static LaurentPolynomial constant(double value);
    static LaurentPolynomial delay(std::size_t lag, double gain = 1.0);

    const std::vector<double>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// Highest power of z^-1 present; 0 for constants and the zero polynomial.
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    double coeff(std::size_t lag) const { return lag < coeffs_.size() ? coeffs_[lag] : 0.0; }
    double max_abs_coeff() const;

    /// Value at z = e^{i omega}.
    Complex evaluate(double omega) const;

    friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

private:
    std::vector<double> coeffs_;
};

/// Real-rational transfer function num(z^-1) / den(z^-1) with den(0) == 1.
class RationalTransfer {
public:
    /// The zero transfer.
    RationalTransfer() = default;
    explicit RationalTransfer(LaurentPolynomial num,
                              LaurentPolynomial den = LaurentPolynomial::constant(1.0));

    static RationalTransfer gain(double value);
    static RationalTransfer delayed_gain(double value, std::size_t lag);

    const LaurentPolynomial& num() const { return num_; }
    const LaurentPolynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    /// Impulse-response coefficient at lag 0 (a direct feedthrough when nonzero).
    double feedthrough() const { return num_.coeff(0); }
    std::size_t max_lag() const;

    Complex evaluate(double omega) const;

    friend bool operator==(const RationalTransfer&, const RationalTransfer&) = default;

private:
    LaurentPolynomial num_;
    LaurentPolynomial den_ = LaurentPolynomial::constant(1.0);
};

/// Uniform grid omega_k = 2*pi*k/N on the unit circle, N a power of two.
class FrequencyGrid {
public:
    static constexpr std::size_t kDefaultSize = 1024;

    explicit FrequencyGrid(std::size_t size = kDefaultSize);

    std::size_t size() const { return size_; }
    double omega(std::size_t k) const;
    /// Resolution guard: N >= 2 * 8 * max_lag.
    bool resolves(std::size_t max_lag) const { return size_ >= 16 * max_lag; }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

private:
    std::size_t size_;
};

/// One n x n complex matrix per grid frequency.
class ComplexMatrixField {
public:
    ComplexMatrixField() = default;
    explicit ComplexMatrixField(std::vector<Eigen::MatrixXcd> values);

    std::size_t size() const { return values_.size(); }
    Eigen::Index dim() const { return values_.empty() ? 0 : values_.front().rows(); }
    const Eigen::MatrixXcd& operator[](std::size_t k) const { return values_[k]; }
    const std::vector<Eigen::MatrixXcd>& values() const { return values_; }

private:
    std::vector<Eigen::MatrixXcd> values_;
};

/// R(tau) = E[y(t) y(t - tau)^T] for |tau| <= max_lag. Only tau >= 0 is stored;
/// negative lags are served as transposes.
class CovarianceSequence {
public:
    explicit CovarianceSequence(std::vector<Eigen::MatrixXd> nonnegative_lags);

    std::size_t max_lag() const { return lags_.size() - 1; }
    Eigen::Index dim() const { return lags_.front().rows(); }
    Eigen::MatrixXd at(long tau) const;
    /// Single entry R_ab(tau) without materializing the matrix.
    double entry(Eigen::Index a, Eigen::Index b, long tau) const;

private:
    std::vector<Eigen::MatrixXd> lags_;
};

class SpectralDensity;

/// Samples t on the grid.
/// @throws DenominatorVanishes if |den(e^{i w_k})| < 1e-12 * max|den coeffs|.
std::vector<Complex> eval_on_grid(const RationalTransfer& t, const FrequencyGrid& grid);

/// Per-frequency inverse by partial-pivot LU.
/// @throws SingularAtFrequency when the reciprocal condition estimate drops below 1e-12.
ComplexMatrixField matrix_inverse_field(const ComplexMatrixField& field);

/// Inverse DFT of the density, R(tau) = (1/N) sum_k S(w_k) e^{i w_k tau}, tau = 0..max_lag.
/// @throws std::invalid_argument if max_lag > N/4.
/// @throws ResolutionTooCoarse if the discarded imaginary part is not negligible.
CovarianceSequence covariances_from_psd(const SpectralDensity& density, std::size_t max_lag);

}  // namespace utfsr
