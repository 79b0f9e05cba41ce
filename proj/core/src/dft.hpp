#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace utfsr::detail {

// Table of e^{i 2 pi k / N}; e^{i w_k tau} is roots[(k * tau) mod N].
inline std::vector<std::complex<double>> unit_roots(std::size_t n) {
    std::vector<std::complex<double>> roots(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        roots[k] = {std::cos(w), std::sin(w)};
    }
    return roots;
}

inline std::size_t wrap(long value, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((value % m) + m) % m);
}

}  // namespace utfsr::detail
