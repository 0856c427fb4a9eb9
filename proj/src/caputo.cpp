// Caputo / Riemann-Liouville operators on uniform time grids and their
// quadrature oracles.
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracdyn/caputo_scheme.hpp"
#include "fracdyn/fracops.hpp"

namespace fracdyn::fracops {

namespace {

void check_series(std::span<const double> u, double dt, std::size_t min_points)
{
    if (u.size() < min_points) {
        throw ValidationError("time series needs at least " + std::to_string(min_points) + " samples");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("dt must be positive and finite", "dt");
    }
    require_finite(u, "time series");
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, double tol)
{
    if (b <= a) return {};
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 25, tol, &err);
    if (!std::isfinite(v) || err > 1e3 * tol * std::max(1.0, std::abs(v))) {
        throw NumericalError("quadrature did not converge: value " + std::to_string(v) + ", error estimate " +
                             std::to_string(err));
    }
    return {v, err};
}

// Double-exponential rule: the substituted Caputo integrands keep a weak
// algebraic endpoint singularity that stalls Gauss-Kronrod bisection.
template <class F>
QuadratureResult integrate_endpoint(F&& f, double a, double b, double tol)
{
    if (b <= a) return {};
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0, l1 = 0.0;
    const double v = ts.integrate(f, a, b, std::max(tol, 1e-15), &err, &l1);
    if (!std::isfinite(v) || err > 1e3 * tol * std::max(1.0, l1)) {
        throw NumericalError("quadrature did not converge: value " + std::to_string(v) + ", error estimate " +
                             std::to_string(err));
    }
    return {v, err};
}

int caputo_integer_order(double beta)
{
    require_caputo_order(beta);
    if (beta == 1.0 || beta == 2.0) {
        throw ValidationError("quadrature oracle needs a non-integer order", "beta");
    }
    return beta < 1.0 ? 1 : 2;
}

} // namespace

std::vector<double> derivative_samples(std::span<const double> u, double dt)
{
    std::vector<double> d(u.size(), 0.0);
    for (std::size_t j = 1; j < u.size(); ++j) d[j] = (u[j] - u[j - 1]) / dt;
    return d;
}

std::vector<double> l1_history_sum(std::span<const double> du_dt, double beta, double dt)
{
    require_l1_order(beta);
    const std::size_t n = du_dt.size();
    std::vector<double> w(n);
    const double p = 1.0 - beta;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        w[i] = std::pow(x + 1.0, p) - (i == 0 ? 0.0 : std::pow(x, p));
    }
    const double scale = std::pow(dt, p) / std::tgamma(2.0 - beta);
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 1; i <= j; ++i) s += w[j - i] * du_dt[i];
        out[j] = s * scale;
    }
    return out;
}

std::vector<double> caputo_left_l1(std::span<const double> u, double beta, double dt)
{
    require_l1_order(beta);
    check_series(u, dt, 2);
    return l1_history_sum(derivative_samples(u, dt), beta, dt);
}

std::vector<double> caputo_left_l1(std::span<const double> u, double beta, std::span<const double> times)
{
    if (times.size() != u.size() || times.size() < 2) {
        throw ValidationError("time nodes must match the samples and number at least 2");
    }
    const double dt = times[1] - times[0];
    for (std::size_t j = 1; j < times.size(); ++j) {
        const double step = times[j] - times[j - 1];
        if (!(step > 0.0) || std::abs(step - dt) > 1e-10 * std::max(std::abs(dt), std::abs(times[j]))) {
            throw ValidationError("time grid is not uniform", "dt");
        }
    }
    return caputo_left_l1(u, beta, dt);
}

std::vector<double> caputo_left(std::span<const double> u, double beta, double dt, double initial_velocity)
{
    require_caputo_order(beta);
    if (beta <= 1.0) return caputo_left_l1(u, beta, dt);
    check_series(u, dt, 3);

    const std::size_t n = u.size();
    std::vector<std::vector<double>> rows;
    rows.reserve(n + 1);
    for (double v : u) rows.push_back({v});
    rows.push_back({3.0 * u[n - 1] - 3.0 * u[n - 2] + u[n - 3]});

    const CaputoScheme scheme(beta, dt, n);
    const std::span<const std::vector<double>> all(rows);
    const double psi[1] = {initial_velocity};
    std::vector<double> out(n, 0.0);
    if (beta == 2.0) {
        out[0] = 2.0 * ((u[1] - u[0]) / dt - initial_velocity) / dt;
    }
    for (std::size_t m = 1; m < n; ++m) {
        scheme.derivative<double>(m + 1, all, psi, std::span<double>(&out[m], 1));
    }
    return out;
}

std::vector<double> caputo_right(std::span<const double> u, double beta, double dt, double terminal_velocity)
{
    std::vector<double> rev(u.rbegin(), u.rend());
    auto left = caputo_left(rev, beta, dt, -terminal_velocity);
    std::reverse(left.begin(), left.end());
    return left;
}

std::vector<double> riemann_liouville_left(std::span<const double> u, double beta, double dt)
{
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ValidationError("Riemann-Liouville derivative needs beta in (0,1)", "beta");
    }
    const auto c = caputo_left_l1(u, beta, dt);
    const double g = std::tgamma(1.0 - beta);
    std::vector<double> out(u.size() - 1);
    for (std::size_t j = 1; j < u.size(); ++j) {
        const double t = static_cast<double>(j) * dt;
        out[j - 1] = c[j] + u[0] * std::pow(t, -beta) / g;
    }
    return out;
}

double riemann_liouville_left_at(std::span<const double> u, double beta, double dt, std::size_t j)
{
    if (j >= u.size()) throw std::out_of_range("riemann_liouville_left_at: node out of range");
    if (j == 0) {
        if (u[0] != 0.0) {
            throw std::domain_error("Riemann-Liouville derivative is singular at t = 0 when u(0) != 0");
        }
        return 0.0;
    }
    return riemann_liouville_left(u, beta, dt)[j - 1];
}

QuadratureResult caputo_left_quadrature_oracle(const SmoothFunction& u, double beta, double t, double tol)
{
    const int n = caputo_integer_order(beta);
    if (!(t > 0.0)) throw ValidationError("oracle needs t > 0", "t");
    const auto& deriv = n == 1 ? u.d1 : u.d2;
    const double p = 1.0 / (n - beta);
    auto f = [&](double s) { return deriv(t - std::pow(s, p)); };
    auto r = integrate_endpoint(f, 0.0, std::pow(t, n - beta), tol);
    const double scale = p / std::tgamma(n - beta);
    return {r.value * scale, r.error_estimate * scale};
}

QuadratureResult caputo_right_quadrature_oracle(const SmoothFunction& u, double beta, double t, double T,
                                                double tol)
{
    const int n = caputo_integer_order(beta);
    if (!(T > t)) throw ValidationError("right derivative needs T > t", "t");
    const auto& deriv = n == 1 ? u.d1 : u.d2;
    const double p = 1.0 / (n - beta);
    auto f = [&](double s) { return deriv(t + std::pow(s, p)); };
    auto r = integrate_endpoint(f, 0.0, std::pow(T - t, n - beta), tol);
    const double sign = n == 1 ? -1.0 : 1.0;
    const double scale = sign * p / std::tgamma(n - beta);
    return {r.value * scale, r.error_estimate * std::abs(scale)};
}

QuadratureResult riesz_quadrature_oracle(const SmoothFunction& u, double alpha, double x, Interval support,
                                         double tol)
{
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ValidationError("real-space Riesz oracle needs alpha in (1,2)", "alpha");
    }
    if (!(support.hi > support.lo)) throw ValidationError("empty support interval");
    const double q = 1.0 / (2.0 - alpha);
    const double e = 2.0 - alpha;

    QuadratureResult total;
    // z >= x:  z - x = s^q
    {
        const double z0 = std::max(support.lo, x);
        if (support.hi > z0) {
            auto f = [&](double s) { return u.d2(x + std::pow(s, q)); };
            const auto r = integrate(f, std::pow(z0 - x, e), std::pow(support.hi - x, e), tol);
            total.value += r.value;
            total.error_estimate += r.error_estimate;
        }
    }
    // z <= x:  x - z = s^q
    {
        const double z1 = std::min(support.hi, x);
        if (z1 > support.lo) {
            auto f = [&](double s) { return u.d2(x - std::pow(s, q)); };
            const auto r = integrate(f, std::pow(x - z1, e), std::pow(x - support.lo, e), tol);
            total.value += r.value;
            total.error_estimate += r.error_estimate;
        }
    }
    const double pref = -q / (2.0 * std::cos(kPi * alpha / 2.0) * std::tgamma(2.0 - alpha));
    return {pref * total.value, std::abs(pref) * total.error_estimate};
}

} // namespace fracdyn::fracops
