// Symbol-level diagnostics: the NLS dispersion relation, the Laplace-transform
// rule for the Caputo derivative, and empirical convergence orders.
#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fracdyn/fields.hpp"
#include "fracdyn/fracops.hpp"
#include "fracdyn/types.hpp"

namespace fracdyn::analysis {

// (i w)^b on the principal branch: exp(b (ln|w| + i pi/2 sign w)).
cplx principal_i_omega_power(double omega, double beta);

// Root of (i w)^b = i Lambda with Lambda = -g|k|^a + a + b A^2 on the
// principal branch, w = -i (i Lambda)^(1/b). Real and equal to Lambda at b = 1.
cplx dispersion_root(double alpha, double beta, const fields::NlsParams& p, double amplitude, double k);

struct DispersionRow {
    double k = 0.0;
    cplx measured = 0.0;
    cplx predicted = 0.0;
    double relative_error = 0.0;
};

struct DispersionReport {
    double alpha = 0.0;
    double beta = 1.0;
    double amplitude = 0.0;
    std::vector<DispersionRow> rows;
    // slope of log|Lambda_measured - a - b A^2| against log|k|; expected alpha
    double fitted_exponent = 0.0;
    double max_relative_error = 0.0;
};

// Plane waves A exp(i k_m x) stepped by nls_step; the frequency is minus the
// unwrapped phase slope of the mode (u ~ exp(-i w t)). beta = 1.
DispersionReport dispersion_check_nls(const GridSpec& grid, const fields::NlsParams& p, double amplitude,
                                      std::span<const std::size_t> modes, double dt, std::size_t n_steps);

// Linear modes from nls_linear_mode_evolution sampled at `times`; the rate z
// of u(t) = u0 E_b(z t^b) is recovered by a complex secant solve at the last
// time and converted to w = -i z^(1/b). beta in (0,1], b = 0.
DispersionReport dispersion_check_modes(double alpha, double beta, double g, double a, std::span<const double> k_list,
                                        std::span<const double> times);

struct LaplaceRow {
    double s = 0.0;
    double lhs = 0.0; // int_0^H e^{-st} D^b u dt
    double rhs = 0.0; // s^b V(s) - s^(b-1) u(0)
    double relative_discrepancy = 0.0;
    double tail_estimate = 0.0;
};

struct LaplaceReport {
    double beta = 0.0;
    double horizon = 0.0;
    std::vector<LaplaceRow> rows;
    double max_relative_discrepancy = 0.0;
};

// Both sides of the Laplace rule for the Caputo derivative by two independent
// quadratures on [0, horizon]. Throws NumericalError when the neglected tail
// e^{-sH}(|u(H)| + |D^b u(H)|)/s exceeds `tail_tolerance`.
LaplaceReport laplace_symbol_check(const fracops::SmoothFunction& u, double beta, std::span<const double> s_values,
                                   double horizon = 40.0, double tail_tolerance = 1e-8);

// Least-squares slope of log(error) against log(step). At least 3 points,
// steps in geometric progression, positive errors.
double convergence_order(std::span<const std::pair<double, double>> step_error);

} // namespace fracdyn::analysis
