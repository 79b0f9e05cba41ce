#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "utfsr/errors.hpp"
#include "utfsr/lti.hpp"
#include "utfsr/spectral.hpp"

using namespace utfsr;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

SpectralDensity constant_density(std::size_t n_grid, const Eigen::MatrixXd& m) {
    return SpectralDensity(FrequencyGrid(n_grid),
                           ComplexMatrixField(std::vector<Eigen::MatrixXcd>(n_grid, m.cast<Complex>())));
}

}  // namespace

TEST_CASE("laurent polynomials trim trailing zeros") {
    LaurentPolynomial p({1.0, 2.0, 0.0, 0.0});
    CHECK(p.coeffs().size() == 2);
    CHECK(p.degree() == 1);
    CHECK(LaurentPolynomial({0.0, 0.0}).is_zero());
    CHECK(LaurentPolynomial::delay(3, 2.0).coeff(3) == 2.0);
    CHECK(close(LaurentPolynomial({1.0, 1.0}).evaluate(std::numbers::pi), 0.0));
}

TEST_CASE("rational transfers need a denominator starting with one") {
    CHECK_THROWS_AS(RationalTransfer(LaurentPolynomial::constant(1.0), LaurentPolynomial({2.0, 1.0})),
                    std::invalid_argument);
    const RationalTransfer t = RationalTransfer::delayed_gain(3.0, 2);
    CHECK(t.feedthrough() == 0.0);
    CHECK(t.max_lag() == 2);
    CHECK(RationalTransfer().is_zero());
}

TEST_CASE("frequency grids are powers of two") {
    CHECK_THROWS_AS(FrequencyGrid(12), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid(1), std::invalid_argument);
    FrequencyGrid g(64);
    CHECK(g.omega(16) == doctest::Approx(std::numbers::pi / 2));
    CHECK(g.resolves(4));
    CHECK_FALSE(g.resolves(5));
}

TEST_CASE("eval_on_grid") {
    SUBCASE("constant") {
        for (const auto v : eval_on_grid(RationalTransfer::gain(3.0), FrequencyGrid(4))) CHECK(close(v, 3.0));
    }
    SUBCASE("unit delay walks the unit circle") {
        const auto v = eval_on_grid(RationalTransfer::delayed_gain(1.0, 1), FrequencyGrid(4));
        CHECK(close(v[0], {1, 0}));
        CHECK(close(v[1], {0, -1}));
        CHECK(close(v[2], {-1, 0}));
        CHECK(close(v[3], {0, 1}));
    }
    SUBCASE("first-order pole at dc") {
        const RationalTransfer t(LaurentPolynomial::constant(1.0), LaurentPolynomial({1.0, -0.5}));
        CHECK(close(eval_on_grid(t, FrequencyGrid(8))[0], 2.0));
    }
    SUBCASE("pole on the circle") {
        const RationalTransfer t(LaurentPolynomial::constant(1.0), LaurentPolynomial({1.0, -1.0}));
        try {
            eval_on_grid(t, FrequencyGrid(8));
            FAIL("expected DenominatorVanishes");
        } catch (const DenominatorVanishes& e) {
            CHECK(e.index == 0);
        }
    }
}

TEST_CASE("eval_on_grid is conjugate symmetric") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> num(4), den{1.0, 0.3 * normal(rng), 0.2 * normal(rng)};
        for (auto& c : num) c = normal(rng);
        const auto v = eval_on_grid(RationalTransfer(LaurentPolynomial(num), LaurentPolynomial(den)), FrequencyGrid(64));
        for (std::size_t k = 1; k < 64; ++k) CHECK(close(v[64 - k], std::conj(v[k]), 1e-12));
    }
}

TEST_CASE("matrix_inverse_field") {
    SUBCASE("identity") {
        const ComplexMatrixField id(std::vector<Eigen::MatrixXcd>(4, Eigen::MatrixXcd::Identity(3, 3)));
        const auto inv = matrix_inverse_field(id);
        for (const auto& m : inv.values()) CHECK(m.isApprox(Eigen::MatrixXcd::Identity(3, 3)));
    }
    SUBCASE("unit lower triangular") {
        Eigen::MatrixXcd a(2, 2);
        a << 1.0, 0.0, Complex(0.7, -0.2), 1.0;
        Eigen::MatrixXcd expected(2, 2);
        expected << 1.0, 0.0, Complex(-0.7, 0.2), 1.0;
        const auto inv = matrix_inverse_field(ComplexMatrixField(std::vector<Eigen::MatrixXcd>(3, a)));
        for (const auto& m : inv.values()) CHECK((m - expected).norm() < 1e-14);
    }
    SUBCASE("singular entry reports its index") {
        std::vector<Eigen::MatrixXcd> v(4, Eigen::MatrixXcd::Identity(2, 2));
        v[2] = Eigen::MatrixXcd::Ones(2, 2);
        try {
            matrix_inverse_field(ComplexMatrixField(v));
            FAIL("expected SingularAtFrequency");
        } catch (const SingularAtFrequency& e) {
            CHECK(e.index == 2);
        }
    }
    SUBCASE("double inversion returns the field") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> normal;
        std::vector<Eigen::MatrixXcd> v;
        for (int k = 0; k < 32; ++k) {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4) * 4.0;
            for (Eigen::Index r = 0; r < 4; ++r)
                for (Eigen::Index c = 0; c < 4; ++c) m(r, c) += Complex(normal(rng), normal(rng));
            v.push_back(m);
        }
        const ComplexMatrixField field(v);
        const auto twice = matrix_inverse_field(matrix_inverse_field(field));
        for (std::size_t k = 0; k < v.size(); ++k) CHECK((twice[k] - v[k]).norm() <= 1e-9 * v[k].norm());
    }
}

TEST_CASE("spectral densities validate their invariants") {
    CHECK_NOTHROW(constant_density(8, Eigen::MatrixXd::Identity(2, 2)));
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(constant_density(8, indefinite), std::invalid_argument);
    Eigen::MatrixXd skew(2, 2);
    skew << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(constant_density(8, skew), std::invalid_argument);
    std::vector<Eigen::MatrixXcd> wrong_size(6, Eigen::MatrixXcd::Identity(1, 1));
    CHECK_THROWS_AS(SpectralDensity(FrequencyGrid(8), ComplexMatrixField(wrong_size)), std::invalid_argument);
    std::vector<Eigen::MatrixXcd> asym(8, Eigen::MatrixXcd::Identity(2, 2));
    asym[1](0, 1) = Complex(0, 0.1);
    asym[1](1, 0) = Complex(0, -0.1);
    CHECK_THROWS_AS(SpectralDensity(FrequencyGrid(8), ComplexMatrixField(asym)), std::invalid_argument);
}

TEST_CASE("covariances_from_psd") {
    SUBCASE("white noise") {
        const auto cov = covariances_from_psd(constant_density(64, Eigen::MatrixXd::Identity(1, 1)), 8);
        CHECK(cov.at(0)(0, 0) == doctest::Approx(1.0));
        for (long tau = 1; tau <= 8; ++tau) CHECK(std::abs(cov.at(tau)(0, 0)) < 1e-14);
    }
    SUBCASE("static pair") {
        Eigen::MatrixXd s(2, 2);
        s << 1.0, 2.0, 2.0, 5.0;
        const auto cov = covariances_from_psd(constant_density(64, s), 4);
        CHECK((cov.at(0) - s).norm() < 1e-12);
    }
    SUBCASE("moving average of order one") {
        // |1 + e^{-iw}|^2 = 2 + 2 cos w
        const FrequencyGrid g(64);
        std::vector<Eigen::MatrixXcd> v;
        for (std::size_t k = 0; k < 64; ++k) v.push_back(Eigen::MatrixXcd::Constant(1, 1, 2.0 + 2.0 * std::cos(g.omega(k))));
        const auto cov = covariances_from_psd(SpectralDensity(g, ComplexMatrixField(v)), 4);
        CHECK(cov.at(0)(0, 0) == doctest::Approx(2.0));
        CHECK(cov.at(1)(0, 0) == doctest::Approx(1.0));
        CHECK(cov.at(-1)(0, 0) == doctest::Approx(1.0));
        CHECK(std::abs(cov.at(2)(0, 0)) < 1e-12);
    }
    SUBCASE("negative lags are transposes") {
        const FrequencyGrid g(64);
        std::vector<Eigen::MatrixXcd> v;
        for (std::size_t k = 0; k < 64; ++k) {
            // y1 = e1, y2 = e2 + y1(t-1)
            const Complex d = std::exp(Complex(0, -g.omega(k)));
            Eigen::MatrixXcd m(2, 2);
            m << 1.0, std::conj(d), d, 2.0;
            v.push_back(m);
        }
        const auto cov = covariances_from_psd(SpectralDensity(g, ComplexMatrixField(v)), 4);
        CHECK(cov.at(1)(1, 0) == doctest::Approx(1.0));
        CHECK(std::abs(cov.at(1)(0, 1)) < 1e-12);
        CHECK((cov.at(-1) - cov.at(1).transpose()).norm() < 1e-15);
        CHECK(cov.entry(0, 1, -1) == doctest::Approx(1.0));
    }
    SUBCASE("lag count is bounded by a quarter of the grid") {
        CHECK_THROWS_AS(covariances_from_psd(constant_density(16, Eigen::MatrixXd::Identity(1, 1)), 5),
                        std::invalid_argument);
    }
}
