#pragma once

#include <cmath>
#include <numbers>

namespace beltrami {

// J0, J1 by power series for |x| <= 12 and the Hankel asymptotic expansion
// beyond, truncated at the smallest term. Keeps the oracle fields free of
// external special-function dependencies.

namespace detail {

inline double bessel_j_series(int nu, double x) {
    const double q = 0.25 * x * x;
    double term = (nu == 0) ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<double>(k) * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

inline double bessel_j_asymptotic(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! (8x)^k), split into the
    // even (P) and odd (Q) cosine/sine series.
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double prev = std::abs(term);
    for (int k = 1; k < 40; ++k) {
        double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * x * k);
        if (std::abs(term) > prev) break;  // asymptotic series started diverging
        prev = std::abs(term);
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            case 0: p += term; break;
        }
        if (std::abs(term) < 1e-17) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) *
           (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

inline double bessel_j0(double x) {
    x = std::abs(x);
    return x <= 12.0 ? detail::bessel_j_series(0, x) : detail::bessel_j_asymptotic(0, x);
}

inline double bessel_j1(double x) {
    double ax = std::abs(x);
    double v = ax <= 12.0 ? detail::bessel_j_series(1, ax) : detail::bessel_j_asymptotic(1, ax);
    return x < 0 ? -v : v;
}

}  // namespace beltrami
