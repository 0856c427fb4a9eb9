// Fractional derivative operators and the Mittag-Leffler function.
//
// Time operators act on samples u_j = u(t_j) of a uniform grid with step dt.
// Space operators act on samples of a periodic function on a GridSpec.
// All functions are pure and may be called concurrently.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracdyn/types.hpp"

namespace fracdyn::fracops {

// ---------------------------------------------------------------- Caputo / RL

// First differences divided by dt: d_0 = 0, d_j = (u_j - u_{j-1}) / dt.
std::vector<double> derivative_samples(std::span<const double> u, double dt);

// L1 product-integration sum for a derivative given as piecewise-constant
// samples du_dt (du_dt[j] is the slope on (t_{j-1}, t_j]):
//   out_j = dt^(1-b)/G(2-b) * sum_{i=1..j} w_{j-i} du_dt[i],  out_0 = 0.
std::vector<double> l1_history_sum(std::span<const double> du_dt, double beta, double dt);

// L1 approximation of the left Caputo derivative 0^C D^beta_t u at every node.
// beta in (0,1]; the value at t_0 is 0.
std::vector<double> caputo_left_l1(std::span<const double> u, double beta, double dt);
// Same, checking that `times` is a uniform grid matching u.
std::vector<double> caputo_left_l1(std::span<const double> u, double beta, std::span<const double> times);

// Left Caputo derivative for any beta in (0,2]. For beta > 1 the half-level
// scheme of CaputoScheme is used with the given initial velocity u'(0); the
// last node uses a linearly extrapolated velocity.
std::vector<double> caputo_left(std::span<const double> u, double beta, double dt, double initial_velocity = 0.0);

// Right Caputo derivative  t^C D^beta_T u  on [t_j, T], T the last node.
// Equal to the left derivative of the time-reversed samples, reversed.
// For beta > 1, `terminal_velocity` is u'(T).
std::vector<double> caputo_right(std::span<const double> u, double beta, double dt, double terminal_velocity = 0.0);

// Left Riemann-Liouville derivative, beta in (0,1):
//   RL = Caputo + u(0) t^-beta / G(1-beta).
// Returned at nodes t_1..t_n (size u.size()-1): the origin is singular.
std::vector<double> riemann_liouville_left(std::span<const double> u, double beta, double dt);
// Single node; throws std::domain_error at j = 0 unless u(0) = 0.
double riemann_liouville_left_at(std::span<const double> u, double beta, double dt, std::size_t j);

// ----------------------------------------------------------------- oracles

// A smooth function with its first two derivatives.
struct SmoothFunction {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Direct adaptive quadrature of the Caputo integral
//   1/G(n-b) int_0^t u^(n)(z) (t-z)^(n-b-1) dz,   n = ceil(b),
// after the substitution t - z = s^(1/(n-b)) which removes the endpoint
// singularity. Throws NumericalError when the error estimate exceeds tol.
QuadratureResult caputo_left_quadrature_oracle(const SmoothFunction& u, double beta, double t, double tol = 1e-12);
// Right derivative on [t, T].
QuadratureResult caputo_right_quadrature_oracle(const SmoothFunction& u, double beta, double t, double T,
                                                double tol = 1e-12);

// ------------------------------------------------------------------ Riesz

// Fourier multiplier of the Riesz derivative on the grid: -|k_m|^alpha (0 at k = 0).
std::vector<double> riesz_symbol(double alpha, const GridSpec& grid);

// Riesz derivative of periodic samples through the multiplier -|k|^alpha.
std::vector<double> riesz_derivative_spectral(std::span<const double> u, double alpha, const GridSpec& grid);
std::vector<cplx> riesz_derivative_spectral(std::span<const cplx> u, double alpha, const GridSpec& grid);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Real-space Riesz derivative, alpha in (1,2):
//   -1/(2 cos(pi a/2) G(2-a)) * int u''(z) |x - z|^(1-a) dz
// with u'' negligible outside `support`. The |x-z|^(1-a) singularity is
// removed by substitution on each side of x.
QuadratureResult riesz_quadrature_oracle(const SmoothFunction& u, double alpha, double x, Interval support,
                                         double tol = 1e-12);

// ---------------------------------------------------------- Mittag-Leffler

// E_b(z) = sum_k z^k / G(b k + 1), b in (0,2].
//
// Evaluation: the double-precision series with term-ratio stopping is used
// when it converges without heavy cancellation (sum of |terms| below 1e3 times
// |result|), which covers |z| <= 5 for b = 1. Otherwise the series is summed
// in 100-digit arithmetic while |z|^(1/b) <= 150. Beyond that the asymptotic
// expansion
//   E_b(z) ~ (1/b) sum_m exp((z e^{2 pi i m})^(1/b)) - sum_k z^-k / G(1 - b k)
// is used, the exponential sum running over branches with |arg z + 2 pi m| < b pi.
cplx mittag_leffler(double beta, cplx z);
double mittag_leffler(double beta, double z);

// ---------------------------------------------------------------- gamma

// 1/G(x), exactly 0 at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);
// G(x) for negative non-integer x through the reflection formula
//   G(x) = pi / (sin(pi x) G(1 - x)).
double gamma_reflected(double x);

} // namespace fracdyn::fracops
