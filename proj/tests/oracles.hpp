// Reference values and small independent evaluators shared by the tests.
// Frozen constants were computed with mpmath at 30 digits.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fracdyn/types.hpp"

namespace oracle {

inline constexpr double e = 2.71828182845904523536;
inline constexpr double two_over_sqrt_pi = 1.12837916709551257390;
// e * erfc(1) = E_{1/2}(-1)
inline constexpr double ml_half_minus_one = 0.427583576155807004411;
// E_{1/2}(-2), E_{0.8}(-1.5), E_{1.5}(-3), E_{1/2}(2) by series summation
inline constexpr double ml_half_minus_two = 0.255395676310505743865;
inline constexpr double ml_08_minus_15 = 0.263639035439626928287;
inline constexpr double ml_15_minus_3 = -0.175565373799978242915;
inline constexpr double ml_half_two = 108.940904389977972412;
// 2 Gamma(-1.5) cos(0.75 pi)
inline constexpr double continuum_a15 = -3.34217103284133400322;
inline constexpr double zeta_25 = 1.34148725725091717976;
// D^{1/2} sin at t = 2: (1/Gamma(1/2)) int_0^2 cos(s) (2-s)^{-1/2} ds
inline constexpr double caputo_half_sin_at_2 = 0.280456455642320756398;
// Gamma(4) / Gamma(4 - b) for b = 0.3, 0.5, 0.8: D^b t^3 at t = 1
inline constexpr double caputo_t3_03 = 1.43862405950805945681;
inline constexpr double caputo_t3_05 = 1.80540666735282011823;
inline constexpr double caputo_t3_08 = 2.47528277513258207861;

// erf by its Maclaurin series, erfc = 1 - erf. Accurate to ~1e-15 for |x| <= 2.
inline double erfc_series(double x)
{
    double term = x, sum = x;
    for (int n = 1; n < 80; ++n) {
        term *= -x * x / n;
        sum += term / (2 * n + 1);
    }
    return 1.0 - 2.0 / std::sqrt(fracdyn::kPi) * sum;
}

// sum_{m=1..8} (c_m cos(k_m x) + s_m sin(k_m x)) / m^2 with uniform(-1,1) coefficients.
inline std::vector<double> smooth_random_field(const fracdyn::GridSpec& grid, std::uint64_t seed, double scale = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> c(8), s(8);
    for (int m = 0; m < 8; ++m) {
        c[m] = dist(rng);
        s[m] = dist(rng);
    }
    std::vector<double> u(grid.n_points(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (int m = 0; m < 8; ++m) {
            const double k = 2.0 * fracdyn::kPi * (m + 1) / grid.length();
            u[i] += (c[m] * std::cos(k * grid.x(i)) + s[m] * std::sin(k * grid.x(i))) / ((m + 1) * (m + 1));
        }
        u[i] *= scale;
    }
    return u;
}

} // namespace oracle
