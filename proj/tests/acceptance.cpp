// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracdyn/analysis.hpp"
#include "fracdyn/chain.hpp"
#include "fracdyn/fft.hpp"
#include "fracdyn/fields.hpp"
#include "fracdyn/fracops.hpp"
#include "fracdyn/kernels.hpp"
#include "oracles.hpp"

using namespace fracdyn;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome operator_exactness()
{
    const GridSpec grid(256, 2.0 * kPi);
    double worst = 0.0;
    for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
        for (std::size_t m = 0; m < 256; ++m) {
            const double k = grid.wavenumbers()[m];
            std::vector<cplx> u(256);
            for (std::size_t i = 0; i < 256; ++i) u[i] = std::polar(1.0, k * grid.x(i));
            const auto r = fracops::riesz_derivative_spectral(std::span<const cplx>(u), alpha, grid);
            const double lam = k == 0.0 ? 0.0 : -std::pow(std::abs(k), alpha);
            for (std::size_t i = 0; i < 256; ++i) {
                const double d = std::abs(r[i] - lam * u[i]);
                worst = std::max(worst, lam == 0.0 ? d : d / std::abs(lam));
            }
        }
    }
    return {worst < 1e-12, "max relative error " + fmt("%.2e", worst)};
}

Outcome caputo_order()
{
    const fracops::SmoothFunction u{[](double t) { return t * t * t; }, [](double t) { return 3.0 * t * t; },
                                    [](double t) { return 6.0 * t; }};
    bool ok = true;
    std::string detail;
    for (double beta : {0.3, 0.5, 0.8}) {
        const double ref = fracops::caputo_left_quadrature_oracle(u, beta, 1.0, 1e-14).value;
        std::vector<std::pair<double, double>> pts;
        double dt = 1e-2;
        for (int h = 0; h <= 4; ++h, dt /= 2.0) {
            const std::size_t n = static_cast<std::size_t>(std::llround(1.0 / dt));
            std::vector<double> s(n + 1);
            for (std::size_t j = 0; j <= n; ++j) s[j] = std::pow(static_cast<double>(j) * dt, 3);
            pts.emplace_back(dt, std::abs(fracops::caputo_left_l1(s, beta, dt).back() - ref));
        }
        const double order = analysis::convergence_order(pts);
        ok = ok && std::abs(order - (2.0 - beta)) <= 0.2;
        detail += "b=" + fmt("%.1f", beta) + " order " + fmt("%.3f", order) + "; ";
    }
    return {ok, detail};
}

Outcome caputo_values()
{
    const std::size_t n = 10000;
    std::vector<double> u(n + 1), c(n + 1, -2.5);
    for (std::size_t j = 0; j <= n; ++j) u[j] = static_cast<double>(j) * 1e-4;
    const double err = std::abs(fracops::caputo_left_l1(u, 0.5, 1e-4).back() - oracle::two_over_sqrt_pi);
    bool zero = true;
    for (double b : {0.2, 0.5, 0.9}) {
        for (double v : fracops::caputo_left_l1(c, b, 1e-4)) zero = zero && v == 0.0;
    }
    return {err < 1e-4 && zero, "|D^0.5 t - 2/sqrt(pi)| = " + fmt("%.2e", err) + (zero ? ", constants -> 0" : ", constant input not 0")};
}

Outcome mittag_leffler_values()
{
    const double e1 = std::abs(fracops::mittag_leffler(1.0, 1.0) - std::exp(1.0));
    const double ref = std::exp(1.0) * oracle::erfc_series(1.0);
    const double e2 = std::abs(fracops::mittag_leffler(0.5, -1.0) - ref);
    return {e1 < 1e-12 && e2 < 1e-8, "E_1(1) err " + fmt("%.2e", e1) + ", E_0.5(-1) err " + fmt("%.2e", e2)};
}

Outcome memory_identity()
{
    std::size_t mismatches = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        std::uniform_real_distribution<double> order(0.05, 0.95);
        std::vector<double> u(1000);
        for (auto& v : u) v = d(rng);
        const double beta = order(rng), g0 = 0.5 + std::abs(d(rng)), dt = 1e-3;
        const auto z = kernels::memory_convolution(kernels::MemoryKernel::power_law(beta, g0),
                                                   fracops::derivative_samples(u, dt), dt);
        const auto c = fracops::caputo_left_l1(u, beta, dt);
        for (std::size_t j = 0; j < u.size(); ++j) mismatches += z[j] != g0 * c[j];
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatching samples over 10 seeds"};
}

Outcome continuum_constant()
{
    const double alpha = 1.5, kdx = 1e-3;
    const std::size_t cutoff = kernels::lattice_cutoff_for(alpha, 1e-10);
    const double ratio = kernels::lattice_symbol_difference(alpha, kdx, 1.0, cutoff) / std::pow(kdx, alpha);
    const double dev = std::abs(ratio / oracle::continuum_a15 - 1.0);
    return {dev < 0.02 && kernels::lattice_tail_bound(alpha, cutoff) < 1e-10,
            "ratio " + fmt("%.6f", ratio) + ", deviation " + fmt("%.2e", dev)};
}

Outcome linear_evolution()
{
    const GridSpec grid(64, 2.0 * kPi);
    const double alpha = 1.5;
    const double c = kernels::renormalized_constant(alpha, 1.0, grid.dx());
    const auto model = fields::ModelSpec::linear(alpha, c);
    const std::size_t m = 2;
    const double lambda = c * std::pow(grid.wavenumbers()[m], alpha);
    const auto fft = FourierTransform::of_size(64);
    bool ok = true;
    std::string detail = "rate " + fmt("%.4f", lambda) + "; ";
    for (double beta : {0.5, 1.0}) {
        std::vector<double> u0(64);
        for (std::size_t i = 0; i < 64; ++i) u0[i] = std::cos(grid.wavenumbers()[m] * grid.x(i));
        const double a0 = std::abs(fft->forward(std::span<const double>(u0))[m]);
        double worst = 0.0;
        fields::EvolveOptions<double> eo;
        eo.n_steps = 1000;
        eo.observer = [&](std::size_t level, const fields::FieldState& st) {
            const double meas = std::abs(fft->forward(std::span<const double>(st.history.back()))[m]) / a0;
            const double pred = fracops::mittag_leffler(beta, lambda * std::pow(st.time(level), beta));
            worst = std::max(worst, std::abs(meas - pred) / pred);
        };
        fields::evolve_field(model, fields::FieldState::initial(grid, 1e-3, u0), beta, eo);
        const double tol = beta == 1.0 ? 1e-3 : 5e-3;
        ok = ok && worst < tol;
        detail += "b=" + fmt("%.1f", beta) + " err " + fmt("%.2e", worst) + "; ";
    }
    return {ok, detail};
}

Outcome chain_dispersion()
{
    chain::ChainSpec spec;
    spec.n_particles = 4096;
    spec.alpha = 1.5;
    spec.beta = 1.0;
    // decaying sign: with g0 > 0 every mode grows and the fastest swamp the measured one
    spec.g0 = -1.0;
    const std::vector<double> k{0.02, 0.05, 0.1};
    chain::CompareOptions opt;
    opt.threads = 3;
    const auto rep = chain::continuum_limit_compare(spec, k, opt);
    double worst = 0.0;
    std::string detail;
    for (const auto& r : rep.rows) {
        worst = std::max(worst, r.relative_deviation);
        detail += "kdx=" + fmt("%.3f", r.kdx) + " dev " + fmt("%.3f", r.relative_deviation) + "; ";
    }
    detail += "fitted power " + fmt("%.3f", rep.fitted_power);
    return {worst < 0.05 && std::abs(rep.fitted_power - 1.5) < 0.05, detail};
}

Outcome brute_force_sum()
{
    chain::ChainSpec spec;
    spec.n_particles = 256;
    spec.alpha = 1.5;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> f(256);
    for (auto& v : f) v = d(rng);
    const auto a = chain::interaction_sum(spec, f);
    const auto b = chain::interaction_sum_direct(spec, f);
    double worst = 0.0;
    for (std::size_t i = 0; i < 256; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return {worst < 1e-12, "max abs difference " + fmt("%.2e", worst)};
}

double sg_kink(double x, double c, double v)
{
    return 4.0 * std::atan(std::exp((x - c) / std::sqrt(1.0 - v * v)));
}

Outcome sine_gordon_kink()
{
    const double L = 80.0, v = 0.2, dt = 0.01;
    const std::size_t N = 1024;
    const GridSpec grid(N, L);
    const double slope = 2.0 * kPi / L, gamma = 1.0 / std::sqrt(1.0 - v * v);
    std::vector<double> u0(N), v0(N);
    for (std::size_t i = 0; i < N; ++i) {
        u0[i] = sg_kink(grid.x(i), L / 2.0, v);
        v0[i] = -2.0 * v * gamma / std::cosh(gamma * (grid.x(i) - L / 2.0));
    }
    const std::size_t steps = static_cast<std::size_t>(std::llround(L / v / dt));
    double e0 = 0.0, drift = 0.0;
    fields::EvolveOptions<double> eo;
    eo.n_steps = steps;
    eo.retain_history = false;
    eo.background_slope = slope;
    eo.observer = [&](std::size_t level, const fields::FieldState& st) {
        if (level < 2) return;
        const double e = fields::sine_gordon_energy(st, level - 1, 2.0, slope);
        if (level == 2) e0 = e;
        drift = std::max(drift, std::abs(e - e0) / std::abs(e0));
    };
    const auto st = fields::evolve_sine_gordon(fields::FieldState::initial(grid, dt, u0, v0), 2.0, 2.0, eo);
    // after one crossing the kink is back at L/2, one winding further along the sheet
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double d = std::remainder(st.current()[i] - sg_kink(grid.x(i), L / 2.0, v), 2.0 * kPi);
        err = std::max(err, std::abs(d));
    }
    return {err < 1e-2 && drift < 1e-2, "shape error " + fmt("%.2e", err) + ", energy drift " + fmt("%.2e", drift)};
}

Outcome nls_plane_wave()
{
    const GridSpec grid(128, 2.0 * kPi);
    const fields::NlsParams p{1.5, 0.7, 0.3, 0.8};
    const double A = 0.9;
    const std::vector<std::size_t> modes{3};
    const auto rep = analysis::dispersion_check_nls(grid, p, A, modes, 1e-3, 1000);

    std::vector<cplx> u0(128);
    for (std::size_t i = 0; i < 128; ++i) {
        const double x = grid.x(i) - kPi;
        u0[i] = std::exp(-x * x) * std::polar(1.0, 2.0 * grid.x(i));
    }
    auto mass = [&](const std::vector<cplx>& u) {
        double s = 0.0;
        for (const auto& z : u) s += std::norm(z);
        return s * grid.dx();
    };
    const double m0 = mass(u0);
    double drift = 0.0;
    for (double alpha : {1.2, 1.5, 2.0}) {
        const auto st = fields::evolve_nls(fields::ComplexFieldState::initial(grid, 1e-3, u0),
                                           {alpha, 1.0, 0.3, 2.0}, 1000, false);
        drift = std::max(drift, std::abs(mass(st.current()) - m0) / m0);
    }
    return {rep.max_relative_error < 1e-4 && drift < 1e-10,
            "frequency error " + fmt("%.2e", rep.max_relative_error) + ", mass drift " + fmt("%.2e", drift)};
}

Outcome dispersion_law()
{
    const GridSpec grid(256, 2.0 * kPi);
    const std::vector<std::size_t> modes{2, 3, 5, 8, 12, 18};
    bool ok = true;
    std::string detail;
    for (double alpha : {1.2, 1.5, 1.8}) {
        const fields::NlsParams p{alpha, 0.5, 0.2, 0.5};
        const double dt = 0.5 / (0.5 * std::pow(18.0, alpha) + 1.0);
        const auto rep = analysis::dispersion_check_nls(grid, p, 0.5, modes, dt, 200);
        ok = ok && std::abs(rep.fitted_exponent - alpha) < 0.02;
        detail += "a=" + fmt("%.1f", alpha) + " fit " + fmt("%.5f", rep.fitted_exponent) + "; ";
    }
    return {ok, detail};
}

Outcome variational_consistency()
{
    const GridSpec grid(128, 20.0);
    const fields::FgleParams p{1.5, -0.8, -1.0, 1.0};
    const double h = 1e-6;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto u = oracle::smooth_random_field(grid, seed);
        const auto r = fields::fgle_residual(u, grid, p);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < 128; ++i) {
            const double keep = u[i];
            u[i] = keep + h;
            const double fp = fields::free_energy(u, grid, p);
            u[i] = keep - h;
            const double fm = fields::free_energy(u, grid, p);
            u[i] = keep;
            const double fd = (fp - fm) / (2.0 * h);
            num = std::max(num, std::abs(fd - r[i] * grid.dx()));
            den = std::max(den, std::abs(r[i] * grid.dx()));
        }
        worst = std::max(worst, num / den);
    }
    return {worst < 1e-6, "relative gradient error " + fmt("%.2e", worst)};
}

Outcome laplace_symbol()
{
    const fracops::SmoothFunction u{[](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); },
                                    [](double t) { return std::exp(-t); }};
    const std::vector<double> s{1.0, 2.0, 5.0};
    const auto rep = analysis::laplace_symbol_check(u, 0.5, s, 40.0);
    return {rep.max_relative_discrepancy < 1e-5, "max discrepancy " + fmt("%.2e", rep.max_relative_discrepancy)};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism()
{
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / ("fracdyn_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    const std::vector<std::pair<std::string, std::string>> runs{
        {"operator_selftest", "[experiment]\nseed = 11\n[grid]\nn_points = 64\n[order]\nalpha = 1.5\n"},
        {"evolve_field",
         "[experiment]\nseed = 5\n[grid]\nn_points = 64\nlength = 20\n[time]\ndt = 0.01\nn_steps = 200\n"
         "snapshot_every = 50\n[order]\nalpha = 1.5\nbeta = 0.8\n[model]\ng = -1\na = -1\nb = 1\n"
         "potential = ginzburg_landau\n[initial]\nprofile = random\namplitude = 0.3\n[tolerance]\nmax_error = 1\n"},
        {"chain", "[experiment]\nseed = 3\n[time]\ndt = 0.01\nn_steps = 100\nsnapshot_every = 25\n[order]\n"
                  "alpha = 1.5\nbeta = 0.6\n[initial]\nprofile = random\n[chain]\nn_particles = 64\n"},
    };
    std::size_t compared = 0, differing = 0;
    for (const auto& [kind, text] : runs) {
        const fs::path cfg = root / (kind + ".ini");
        std::ofstream(cfg) << text;
        for (const char* rep : {"a", "b"}) {
            const std::string cmd = std::string(FRACDYN_CLI) + " " + kind + " --config " + cfg.string() + " --out " +
                                    (root / kind / rep).string() + " --threads 1 > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                fs::remove_all(root);
                return {false, kind + " run failed"};
            }
        }
        for (const auto& e : fs::directory_iterator(root / kind / "a")) {
            ++compared;
            differing += slurp(e.path()) != slurp(root / kind / "b" / e.path().filename());
        }
    }
    fs::remove_all(root);
    return {compared > 0 && differing == 0,
            std::to_string(compared) + " files compared, " + std::to_string(differing) + " differ"};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> all{
        {1, "operator exactness", 1.0, operator_exactness},
        {2, "Caputo L1 order", 5.0, caputo_order},
        {3, "Caputo analytic values", 1.0, caputo_values},
        {4, "Mittag-Leffler oracle", 1.0, mittag_leffler_values},
        {5, "memory-kernel identity", 1.0, memory_identity},
        {6, "continuum-limit constant", 1.0, continuum_constant},
        {7, "linear field evolution", 10.0, linear_evolution},
        {8, "chain to PDE dispersion", 60.0, chain_dispersion},
        {9, "brute-force equivalence", 1.0, brute_force_sum},
        {10, "classical sine-Gordon limit", 30.0, sine_gordon_kink},
        {11, "alpha-NLS", 10.0, nls_plane_wave},
        {12, "dispersion law", 30.0, dispersion_law},
        {13, "variational consistency", 5.0, variational_consistency},
        {14, "Laplace symbol", 5.0, laplace_symbol},
        {15, "determinism", 60.0, cli_determinism},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.passed && secs <= c.budget_s;
        if (o.passed && !pass) o.detail += " (over time budget)";
        failed += !pass;
        std::printf("[%s] %2d %-28s %s (%.2f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
