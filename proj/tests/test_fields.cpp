#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "fracdyn/fields.hpp"
#include "fracdyn/fracops.hpp"
#include "oracles.hpp"

using namespace fracdyn;
using namespace fracdyn::fields;

namespace {

using cvec = std::vector<cplx>;

// O(N^2) transforms, no FFT library
cvec naive_dft(const cvec& u, int sign)
{
    const std::size_t n = u.size();
    cvec out(n);
    for (std::size_t m = 0; m < n; ++m) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += u[j] * std::polar(1.0, sign * 2 * kPi * double(m * j % n) / double(n));
        out[m] = s;
    }
    return out;
}

double wavenumber(std::size_t m, std::size_t n, double L)
{
    const double mm = m <= n / 2 ? double(m) : double(m) - double(n);
    return 2 * kPi * mm / L;
}

// backward Euler in time, spatial term implicit, force explicit
std::vector<double> classical_gl_oracle(std::vector<double> u, double L, double g, double a, double b, double dt, int steps)
{
    const std::size_t n = u.size();
    for (int s = 0; s < steps; ++s) {
        cvec w(n), f(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = u[i];
            f[i] = a * u[i] + b * u[i] * u[i] * u[i];
        }
        const auto W = naive_dft(w, -1), F = naive_dft(f, -1);
        cvec next(n);
        for (std::size_t m = 0; m < n; ++m) {
            const double k = wavenumber(m, n, L);
            next[m] = (W[m] / dt - F[m]) / (1.0 / dt - g * k * k);
        }
        const auto back = naive_dft(next, +1);
        for (std::size_t i = 0; i < n; ++i) u[i] = back[i].real() / double(n);
    }
    return u;
}

cvec nls_oracle(cvec u, double L, const NlsParams& p, double dt, int steps)
{
    const std::size_t n = u.size();
    auto phase = [&](cvec& v) {
        for (auto& z : v) z *= std::polar(1.0, -(p.a + p.b * std::norm(z)) * dt / 2);
    };
    for (int s = 0; s < steps; ++s) {
        phase(u);
        auto U = naive_dft(u, -1);
        for (std::size_t m = 0; m < n; ++m) {
            U[m] *= std::polar(1.0, p.g * std::pow(std::abs(wavenumber(m, n, L)), p.alpha) * dt);
        }
        u = naive_dft(U, +1);
        for (auto& z : u) z /= double(n);
        phase(u);
    }
    return u;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
    return w;
}

std::vector<double> cos_mode(const GridSpec& grid, int m, double amp = 1.0)
{
    std::vector<double> u(grid.n_points());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = amp * std::cos(2 * kPi * m * grid.x(i) / grid.length());
    return u;
}

EvolveOptions<double> steps(std::size_t n)
{
    EvolveOptions<double> o;
    o.n_steps = n;
    return o;
}

} // namespace

TEST_CASE("model presets")
{
    const auto gl = ModelSpec::ginzburg_landau(1.5, -2.0, -1.0, 1.0);
    CHECK(gl.force(2.0) == doctest::Approx(-2.0 + 8.0));
    CHECK(gl.potential_energy(2.0) == doctest::Approx(-2.0 + 4.0));
    const auto flow = ModelSpec::fgle_flow(1.5, -2.0, -1.0, 1.0);
    CHECK(flow.force(2.0) == doctest::Approx(-gl.force(2.0)));
    const GridSpec grid(16, 2 * kPi);
    const auto S = gl.spatial_symbol(grid);
    CHECK(S[3] == doctest::Approx(-2.0 * -std::pow(3.0, 1.5)));
    const auto sg = ModelSpec::sine_gordon(1.5);
    CHECK(sg.force(0.5) == doctest::Approx(std::sin(0.5)));
    ModelSpec bad;
    bad.potential = Potential::custom;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("classical Ginzburg-Landau step matches an independent integrator")
{
    const GridSpec grid(32, 2 * kPi);
    const auto u0 = oracle::smooth_random_field(grid, 11, 0.8);
    const double dt = 0.01;
    const auto st = evolve_field(ModelSpec::ginzburg_landau(2.0, -0.5, -1.0, 1.0), FieldState::initial(grid, dt, u0), 1.0,
                                 steps(60));
    const auto ref = classical_gl_oracle(u0, grid.length(), -0.5, -1.0, 1.0, dt, 60);
    CHECK(max_diff(st.current(), ref) < 1e-8);
}

TEST_CASE("backward Euler factor on a mode with two spatial terms")
{
    const GridSpec grid(32, 2 * kPi);
    ModelSpec m = ModelSpec::linear(1.5, -0.7);
    m.spatial_terms.push_back({2.0, -0.2});
    const double dt = 0.02, k = 3.0;
    const double lambda = -0.7 * std::pow(k, 1.5) - 0.2 * k * k;
    const auto st = evolve_field(m, FieldState::initial(grid, dt, cos_mode(grid, 3)), 1.0, steps(40));
    const double factor = std::pow(1.0 / (1.0 - lambda * dt), 40);
    CHECK(max_diff(st.current(), cos_mode(grid, 3, factor)) < 1e-12);
}

TEST_CASE("fractional mode follows E_beta(lambda t^beta)")
{
    const GridSpec grid(32, 2 * kPi);
    for (double beta : {0.4, 0.7}) {
        const double c = -0.5, k = 2.0, lambda = c * k * k;
        auto err = [&](double dt, std::size_t n) {
            const auto st = evolve_field(ModelSpec::linear(2.0, c), FieldState::initial(grid, dt, cos_mode(grid, 2)),
                                         beta, steps(n));
            const double exact = fracops::mittag_leffler(beta, lambda * std::pow(n * dt, beta));
            return std::abs(st.current()[0] - exact);
        };
        const double e1 = err(0.01, 100), e2 = err(0.005, 200), e3 = err(0.0025, 400);
        CAPTURE(e1);
        CAPTURE(e2);
        CAPTURE(e3);
        CHECK(e3 < 2e-3);
        const double order = std::log2(e2 / e3);
        CHECK(order > 0.9);
        CHECK(e2 < e1);
    }
}

TEST_CASE("Caputo order in (1,2): oscillating mode")
{
    const GridSpec grid(16, 2 * kPi);
    const double beta = 1.6, c = -1.0, k = 1.0;
    auto err = [&](double dt, std::size_t n) {
        auto s = FieldState::initial(grid, dt, cos_mode(grid, 1), std::vector<double>(16, 0.0));
        const auto st = evolve_field(ModelSpec::linear(2.0, c), s, beta, steps(n));
        return std::abs(st.current()[0] - fracops::mittag_leffler(beta, c * k * k * std::pow(n * dt, beta)));
    };
    const double e1 = err(0.02, 50), e2 = err(0.01, 100);
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(e2 < 5e-3);
    CHECK(e2 < e1);
}

TEST_CASE("translation equivariance")
{
    const GridSpec grid(64, 10.0);
    const auto u0 = oracle::smooth_random_field(grid, 3);
    std::vector<double> shifted(64);
    for (std::size_t i = 0; i < 64; ++i) shifted[(i + 5) % 64] = u0[i];
    const auto m = ModelSpec::ginzburg_landau(1.3, -1.0, -1.0, 1.0);
    const auto a = evolve_field(m, FieldState::initial(grid, 0.01, u0), 0.8, steps(50));
    const auto b = evolve_field(m, FieldState::initial(grid, 0.01, shifted), 0.8, steps(50));
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(b.current()[(i + 5) % 64] - a.current()[i]) < 1e-12);
}

TEST_CASE("manufactured solution with a source")
{
    const GridSpec grid(16, 2 * kPi);
    const double beta = 0.6, c = -0.3, dt = 0.005;
    ModelSpec m = ModelSpec::linear(2.0, c);
    // u = t^2 cos x, R_2 u = -u
    m.source = [&](double t, double x) {
        return -(2 * std::pow(t, 2 - beta) / std::tgamma(3 - beta) - c * t * t) * std::cos(x);
    };
    const auto st = evolve_field(m, FieldState::initial(grid, dt, std::vector<double>(16, 0.0)), beta, steps(200));
    std::vector<double> exact(16);
    for (std::size_t i = 0; i < 16; ++i) exact[i] = std::cos(grid.x(i));
    CHECK(max_diff(st.current(), exact) < 2e-3);

    const auto r = residual(m, st, beta);
    double worst = 0.0;
    for (const auto& row : r) {
        for (double v : row) worst = std::max(worst, std::abs(v));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("residual of the zero trajectory")
{
    const GridSpec grid(16, 2 * kPi);
    const auto m = ModelSpec::ginzburg_landau(1.5, -1.0, -1.0, 1.0);
    const auto st = evolve_field(m, FieldState::initial(grid, 0.01, std::vector<double>(16, 0.0)), 0.5, steps(20));
    for (const auto& row : residual(m, st, 0.5)) {
        for (double v : row) CHECK(v == 0.0);
    }
}

TEST_CASE("blow-up is reported")
{
    const GridSpec grid(16, 2 * kPi);
    const auto m = ModelSpec::ginzburg_landau(2.0, -1.0, 0.0, -1e4);
    CHECK_THROWS_AS(evolve_field(m, FieldState::initial(grid, 0.01, std::vector<double>(16, 1.0)), 1.0, steps(20)),
                    NumericalError);
}

TEST_CASE("stepping input checks")
{
    const GridSpec grid(16, 2 * kPi);
    auto m = ModelSpec::linear(2.0, -1.0);
    m.g0_prime = 0.5;
    CHECK_THROWS_AS(evolve_field(m, FieldState::initial(grid, 0.01, cos_mode(grid, 1)), 0.5, steps(2)),
                    ValidationError);
    CHECK_THROWS_AS(
        evolve_field(ModelSpec::linear(2.0, -1.0), FieldState::initial(grid, 0.01, cos_mode(grid, 1)), 1.5, steps(2)),
        ValidationError);
    CHECK_THROWS_AS(FieldState::initial(grid, 0.01, std::vector<double>(15, 0.0)), ValidationError);
}

TEST_CASE("NLS conserves mass and rotates plane waves")
{
    const GridSpec grid(64, 2 * kPi);
    const NlsParams p{1.5, -1.0, 0.3, 0.8};
    cvec u0(64);
    const double A = 0.7;
    for (std::size_t i = 0; i < 64; ++i) u0[i] = A * std::polar(1.0, 4 * grid.x(i));
    const auto st = evolve_nls(ComplexFieldState::initial(grid, 0.01, u0), p, 300);
    const double t = 300 * 0.01;
    const double omega = -p.g * std::pow(4.0, p.alpha) + p.a + p.b * A * A;
    double worst = 0.0;
    for (std::size_t i = 0; i < 64; ++i) worst = std::max(worst, std::abs(st.current()[i] - u0[i] * std::polar(1.0, -omega * t)));
    CHECK(worst < 1e-11);

    cvec g0(64);
    for (std::size_t i = 0; i < 64; ++i) g0[i] = 1.2 * std::exp(-2.0 * std::pow(grid.x(i) - kPi, 2)) * std::polar(1.0, grid.x(i));
    auto mass = [](const cvec& v) {
        double s = 0.0;
        for (auto z : v) s += std::norm(z);
        return s;
    };
    const auto gs = evolve_nls(ComplexFieldState::initial(grid, 0.005, g0), p, 400);
    CHECK(mass(gs.current()) == doctest::Approx(mass(g0)).epsilon(1e-12));
}

TEST_CASE("NLS Gaussian matches an independent split-step")
{
    const GridSpec grid(32, 8.0);
    const NlsParams p{2.0, 0.5, 0.0, -1.0};
    cvec u0(32);
    for (std::size_t i = 0; i < 32; ++i) u0[i] = std::exp(-std::pow(grid.x(i) - 4.0, 2));
    const auto st = evolve_nls(ComplexFieldState::initial(grid, 0.01, u0), p, 100);
    const auto ref = nls_oracle(u0, 8.0, p, 0.01, 100);
    double worst = 0.0;
    for (std::size_t i = 0; i < 32; ++i) worst = std::max(worst, std::abs(st.current()[i] - ref[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("linear fractional NLS mode")
{
    const double alpha = 1.5, g = -1.0, a = 0.2, k = 1.0;
    const double lam = -g * std::pow(k, alpha) + a;
    CHECK(std::abs(nls_linear_mode_evolution(alpha, 1.0, g, a, k, 2.0, 0.7) - 2.0 * std::polar(1.0, lam * 0.7)) < 1e-13);
    // series for E_beta(i lam t^beta)
    const double beta = 0.5, t = 1.3;
    cplx z = cplx(0.0, lam * std::pow(t, beta)), term = 1.0, sum = 0.0;
    for (int j = 0; j < 80; ++j) {
        sum += term / std::tgamma(beta * j + 1);
        term *= z;
    }
    CHECK(std::abs(nls_linear_mode_evolution(alpha, beta, g, a, k, 1.0, t) - sum) < 1e-12);
}

TEST_CASE("free energy")
{
    const GridSpec grid(32, 2 * kPi);
    const FgleParams p{1.5, -0.8, -1.0, 1.0};
    const std::vector<double> flat(32, 0.6);
    CHECK(free_energy(flat, grid, p) == doctest::Approx(2 * kPi * (-0.18 + 0.6 * 0.6 * 0.6 * 0.6 / 4)).epsilon(1e-13));
    const FgleParams lin{1.5, -0.8, 0.0, 0.0};
    CHECK(free_energy(cos_mode(grid, 2), grid, lin) ==
          doctest::Approx(0.5 * -0.8 * -std::pow(2.0, 1.5) * kPi).epsilon(1e-12));

    // gradient is dx times the residual
    const auto u = oracle::smooth_random_field(grid, 8);
    const auto r = fgle_residual(u, grid, p);
    for (std::size_t i : {0u, 7u, 19u}) {
        auto up = u, dn = u;
        const double h = 1e-5;
        up[i] += h;
        dn[i] -= h;
        const double fd = (free_energy(up, grid, p) - free_energy(dn, grid, p)) / (2 * h);
        CHECK(fd == doctest::Approx(grid.dx() * r[i]).epsilon(1e-7));
    }
}

TEST_CASE("stationary uniform states")
{
    const GridSpec grid(32, 2 * kPi);
    const FgleParams p{1.5, -1.0, -1.0, 1.0};
    auto res = stationary_fgle_solve(grid, p, std::vector<double>(32, 0.8));
    REQUIRE(res.converged);
    for (double v : res.u) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    res = stationary_fgle_solve(grid, p, std::vector<double>(32, -0.7));
    for (double v : res.u) CHECK(v == doctest::Approx(-1.0).epsilon(1e-12));
    res = stationary_fgle_solve(grid, FgleParams{1.5, -1.0, 1.0, 1.0}, std::vector<double>(32, 0.5));
    REQUIRE(res.converged);
    for (double v : res.u) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("stationary kink pair matches a dense Newton")
{
    const std::size_t n = 96;
    const double L = 16.0;
    const GridSpec grid(n, L);
    const FgleParams p{2.0, -1.0, -1.0, 1.0};
    std::vector<double> guess(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        guess[i] = std::tanh((x - L / 4) / 1.2) * std::tanh((3 * L / 4 - x) / 1.2);
    }
    const auto res = stationary_fgle_solve(grid, p, guess);
    REQUIRE(res.converged);

    // dense second-derivative matrix from the trigonometric interpolant
    Eigen::MatrixXd D2(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                const double k = wavenumber(m, n, L);
                s += -k * k * std::cos(k * (grid.x(i) - grid.x(j)));
            }
            D2(i, j) = s / double(n);
        }
    }
    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(guess.data(), n);
    for (int it = 0; it < 50; ++it) {
        const Eigen::VectorXd R = p.g * (D2 * u) + p.a * u + p.b * u.array().cube().matrix();
        if (R.norm() < 1e-13) break;
        Eigen::MatrixXd J = p.g * D2;
        J.diagonal() += (p.a + 3 * p.b * u.array().square()).matrix();
        // the pair translates freely: minimum-norm step
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
        cod.setThreshold(1e-9);
        u -= cod.solve(R);
    }
    // compare modulo a rigid translation: drop the component along u'
    cvec uc(n);
    for (std::size_t i = 0; i < n; ++i) uc[i] = u[i];
    auto U = naive_dft(uc, -1);
    for (std::size_t m = 0; m < n; ++m) U[m] *= (m == n / 2) ? cplx(0.0) : cplx(0.0, wavenumber(m, n, L));
    const auto du = naive_dft(U, +1);
    double dd = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dd += (res.u[i] - u[i]) * du[i].real();
        vv += du[i].real() * du[i].real();
    }
    double worst = 0.0, shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(res.u[i] - u[i] - dd / vv * du[i].real()));
        shift = std::max(shift, std::abs(res.u[i] - u[i]));
    }
    CAPTURE(shift);
    CHECK(res.null_directions == 1);
    CHECK(worst < 1e-8);
}

TEST_CASE("sine-Gordon energy is conserved for the classical equation")
{
    const GridSpec grid(64, 2 * kPi);
    std::vector<double> u0(64), v0(64, 0.0);
    for (std::size_t i = 0; i < 64; ++i) u0[i] = 0.5 * std::cos(grid.x(i));
    EvolveOptions<double> o;
    o.n_steps = 400;
    const auto st = evolve_sine_gordon(FieldState::initial(grid, 0.01, u0, v0), 2.0, 2.0, o);
    const double e0 = sine_gordon_energy(st, 1, 2.0);
    const double e1 = sine_gordon_energy(st, st.levels() - 2, 2.0);
    CHECK(std::abs(e1 - e0) < 1e-3 * e0);
}
