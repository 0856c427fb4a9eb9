#include "fracdyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracdyn/fft.hpp"

namespace fracdyn::analysis {

namespace {

double slope(std::span<const double> x, std::span<const double> y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (!(std::abs(den) > 0.0)) throw ValidationError("degenerate abscissae for a slope fit");
    return (n * sxy - sx * sy) / den;
}

double wrap(double d)
{
    while (d > kPi) d -= 2.0 * kPi;
    while (d <= -kPi) d += 2.0 * kPi;
    return d;
}

void finish(DispersionReport& rep, double offset, bool from_omega)
{
    rep.max_relative_error = 0.0;
    for (auto& r : rep.rows) {
        r.relative_error = std::abs(r.measured - r.predicted) / std::max(std::abs(r.predicted), 1e-300);
        rep.max_relative_error = std::max(rep.max_relative_error, r.relative_error);
    }
    if (rep.rows.size() < 2) return;
    std::vector<double> lx, ly;
    for (const auto& r : rep.rows) {
        // Lambda recovered from the measurement
        cplx lam = r.measured;
        if (!from_omega) lam = std::pow(cplx(0.0, 1.0) * r.measured, rep.beta) / cplx(0.0, 1.0);
        const double d = std::abs(lam - offset);
        if (!(d > 0.0)) throw NumericalError("dispersion fit: measured rate equals the k = 0 offset");
        lx.push_back(std::log(std::abs(r.k)));
        ly.push_back(std::log(d));
    }
    rep.fitted_exponent = slope(lx, ly);
}

} // namespace

cplx principal_i_omega_power(double omega, double beta)
{
    if (omega == 0.0) return 0.0;
    const double sgn = omega > 0.0 ? 1.0 : -1.0;
    return std::exp(beta * cplx(std::log(std::abs(omega)), sgn * kPi / 2.0));
}

cplx dispersion_root(double alpha, double beta, const fields::NlsParams& p, double amplitude, double k)
{
    require_spatial_order(alpha);
    if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("dispersion relation needs beta in (0,1]", "beta");
    const double lam = -p.g * std::pow(std::abs(k), alpha) + p.a + p.b * amplitude * amplitude;
    if (beta == 1.0) return lam;
    return cplx(0.0, -1.0) * std::pow(cplx(0.0, lam), 1.0 / beta);
}

DispersionReport dispersion_check_nls(const GridSpec& grid, const fields::NlsParams& p, double amplitude,
                                      std::span<const std::size_t> modes, double dt, std::size_t n_steps)
{
    if (modes.empty()) throw ValidationError("no modes requested", "modes");
    if (n_steps < 2) throw ValidationError("need at least 2 steps", "n_steps");
    const std::size_t N = grid.n_points();
    const auto fft = FourierTransform::of_size(N);

    DispersionReport rep;
    rep.alpha = p.alpha;
    rep.beta = 1.0;
    rep.amplitude = amplitude;
    for (std::size_t m : modes) {
        if (m >= N) throw ValidationError("mode index outside the grid", "modes");
        const double k = grid.wavenumbers()[m];
        const cplx pred = dispersion_root(p.alpha, 1.0, p, amplitude, k);
        if (std::abs(pred.real()) * dt > kPi / 2.0) {
            throw NumericalError("phase unwrapping failure: frequency too large for dt");
        }
        std::vector<cplx> u0(N);
        for (std::size_t i = 0; i < N; ++i) u0[i] = std::polar(amplitude, k * grid.x(i));
        auto st = fields::ComplexFieldState::initial(grid, dt, std::move(u0));

        std::vector<double> t{0.0}, phase;
        auto coeff = [&](const std::vector<cplx>& u) { return fft->forward(std::span<const cplx>(u))[m]; };
        phase.push_back(std::arg(coeff(st.history.back())));
        for (std::size_t s = 0; s < n_steps; ++s) {
            st = fields::evolve_nls(std::move(st), p, 1, false);
            const double ph = std::arg(coeff(st.history.back()));
            phase.push_back(phase.back() + wrap(ph - phase.back()));
            t.push_back(st.time(st.levels() - 1));
        }
        DispersionRow row;
        row.k = k;
        row.measured = -slope(t, phase);
        row.predicted = pred;
        rep.rows.push_back(row);
    }
    finish(rep, p.a + p.b * amplitude * amplitude, true);
    return rep;
}

DispersionReport dispersion_check_modes(double alpha, double beta, double g, double a, std::span<const double> k_list,
                                        std::span<const double> times)
{
    if (k_list.empty()) throw ValidationError("no wavenumbers requested", "k");
    if (times.empty()) throw ValidationError("no sample times", "times");
    if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("mode check needs beta in (0,1]", "beta");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
            throw ValidationError("sample times must be positive and increasing", "times");
        }
    }
    const fields::NlsParams p{alpha, g, a, 0.0};
    DispersionReport rep;
    rep.alpha = alpha;
    rep.beta = beta;

    for (double k : k_list) {
        // follow the root of E_b(z t^b) = u(t)/u0 from the first sample time to the last
        cplx z = 0.0;
        bool seeded = false;
        for (double t : times) {
            const cplx target = fields::nls_linear_mode_evolution(alpha, beta, g, a, k, 1.0, t);
            const double tb = std::pow(t, beta);
            auto f = [&](cplx zz) { return fracops::mittag_leffler(beta, zz * tb) - target; };
            if (!seeded) {
                z = (target - 1.0) * std::tgamma(1.0 + beta) / tb;
                seeded = true;
            }
            cplx z0 = z, z1 = z * (1.0 + 1e-4) + cplx(1e-8, 1e-8);
            cplx f0 = f(z0), f1 = f(z1);
            for (int it = 0; it < 100 && std::abs(f1) > 1e-15 * std::max(1.0, std::abs(target)); ++it) {
                if (f1 == f0) break;
                const cplx z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
                z0 = z1;
                f0 = f1;
                z1 = z2;
                f1 = f(z1);
            }
            if (!(std::abs(f1) <= 1e-9 * std::max(1.0, std::abs(target)))) {
                throw NumericalError("dispersion fit: Mittag-Leffler inversion did not converge");
            }
            z = z1;
        }
        DispersionRow row;
        row.k = k;
        row.measured = cplx(0.0, -1.0) * std::pow(z, 1.0 / beta);
        row.predicted = dispersion_root(alpha, beta, p, 0.0, k);
        rep.rows.push_back(row);
    }
    finish(rep, a, false);
    return rep;
}

LaplaceReport laplace_symbol_check(const fracops::SmoothFunction& u, double beta, std::span<const double> s_values,
                                   double horizon, double tail_tolerance)
{
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("Laplace check needs beta in (0,1)", "beta");
    if (!(horizon > 0.0)) throw ValidationError("horizon must be positive", "horizon");
    if (s_values.empty()) throw ValidationError("no Laplace variables", "s");
    boost::math::quadrature::tanh_sinh<double> ts;

    auto caputo = [&](double t) {
        if (t <= 0.0) return 0.0;
        return fracops::caputo_left_quadrature_oracle(u, beta, t, 1e-13).value;
    };

    LaplaceReport rep;
    rep.beta = beta;
    rep.horizon = horizon;
    const double u0 = u.value(0.0);
    for (double s : s_values) {
        if (!(s > 0.0)) throw ValidationError("Laplace variable must be positive", "s");
        LaplaceRow row;
        row.s = s;
        row.tail_estimate = std::exp(-s * horizon) * (std::abs(u.value(horizon)) + std::abs(caputo(horizon))) / s;
        if (row.tail_estimate > tail_tolerance) {
            throw NumericalError("Laplace horizon too short: neglected tail " + std::to_string(row.tail_estimate));
        }
        row.lhs = ts.integrate([&](double t) { return std::exp(-s * t) * caputo(t); }, 0.0, horizon);
        const double v = ts.integrate([&](double t) { return std::exp(-s * t) * u.value(t); }, 0.0, horizon);
        row.rhs = std::pow(s, beta) * v - std::pow(s, beta - 1.0) * u0;
        row.relative_discrepancy = std::abs(row.lhs - row.rhs) / std::max(std::abs(row.rhs), 1e-300);
        rep.max_relative_discrepancy = std::max(rep.max_relative_discrepancy, row.relative_discrepancy);
        rep.rows.push_back(row);
    }
    return rep;
}

double convergence_order(std::span<const std::pair<double, double>> step_error)
{
    if (step_error.size() < 3) throw ValidationError("convergence order needs at least 3 points", "errors");
    std::vector<double> lx, ly;
    for (const auto& [h, e] : step_error) {
        if (!(h > 0.0)) throw ValidationError("step sizes must be positive", "step");
        if (!(e > 0.0)) throw ValidationError("errors must be positive", "errors");
        lx.push_back(std::log(h));
        ly.push_back(std::log(e));
    }
    const double ratio = lx[1] - lx[0];
    for (std::size_t i = 2; i < lx.size(); ++i) {
        if (std::abs((lx[i] - lx[i - 1]) - ratio) > 1e-6 * std::max(1.0, std::abs(ratio))) {
            throw ValidationError("step sizes are not in geometric progression", "step");
        }
    }
    return slope(lx, ly);
}

} // namespace fracdyn::analysis
