#include <cmath>

#include "fracdyn/fft.hpp"
#include "fracdyn/fracops.hpp"

namespace fracdyn::fracops {

std::vector<double> riesz_symbol(double alpha, const GridSpec& grid)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("Riesz order must be positive", "alpha");
    }
    const auto& k = grid.wavenumbers();
    std::vector<double> s(k.size());
    for (std::size_t m = 0; m < k.size(); ++m) {
        s[m] = k[m] == 0.0 ? 0.0 : -std::pow(std::abs(k[m]), alpha);
    }
    return s;
}

std::vector<double> riesz_derivative_spectral(std::span<const double> u, double alpha, const GridSpec& grid)
{
    if (u.size() != grid.n_points()) throw ValidationError("samples do not match the grid", "n_points");
    require_finite(u, "riesz_derivative_spectral");
    const auto symbol = riesz_symbol(alpha, grid);
    return apply_symbol(u, symbol);
}

std::vector<cplx> riesz_derivative_spectral(std::span<const cplx> u, double alpha, const GridSpec& grid)
{
    if (u.size() != grid.n_points()) throw ValidationError("samples do not match the grid", "n_points");
    require_finite(u, "riesz_derivative_spectral");
    const auto symbol = riesz_symbol(alpha, grid);
    return apply_symbol(u, symbol);
}

} // namespace fracdyn::fracops
