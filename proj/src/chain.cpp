#include "fracdyn/chain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "fracdyn/fft.hpp"
#include "fracdyn/fracops.hpp"
#include "fracdyn/kernels.hpp"

namespace fracdyn::chain {

namespace {

fields::ModelSpec stepping_model(const ChainSpec& spec)
{
    fields::ModelSpec m = spec.forces;
    m.g0 = 1.0;
    m.g0_prime = 0.0;
    m.spatial_terms.clear();
    m.field_kind = fields::FieldKind::real;
    return m;
}

double mode_amplitude(std::span<const double> u, std::span<const double> c, std::span<const double> s)
{
    // |projection| onto cos and sin, so a travelling phase does not matter
    double pc = 0.0, ps = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        pc += u[i] * c[i];
        ps += u[i] * s[i];
    }
    const double n = static_cast<double>(u.size());
    return 2.0 * std::hypot(pc, ps) / n;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ModeRun {
    std::vector<double> times;
    std::vector<double> ratio; // a(t)/a(0)
};

ModeRun run_mode(const ChainSpec& spec, std::size_t mode, double horizon, const CompareOptions& opt)
{
    const std::size_t N = spec.n_particles;
    const GridSpec grid = spec.grid();
    const double k = grid.wavenumbers()[mode];
    std::vector<double> u0(N), cs(N), sn(N);
    for (std::size_t i = 0; i < N; ++i) {
        cs[i] = std::cos(k * grid.x(i));
        sn[i] = std::sin(k * grid.x(i));
        u0[i] = opt.amplitude * cs[i];
    }
    std::vector<double> v0;
    if (spec.beta > 1.0) v0.assign(N, 0.0);

    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / opt.dt));
    const std::size_t samples = std::max<std::size_t>(2, std::min(opt.fit_samples, n_steps));
    const std::size_t stride = std::max<std::size_t>(1, n_steps / samples);

    ModeRun run;
    const double a0 = mode_amplitude(u0, cs, sn);
    run.times.push_back(0.0);
    run.ratio.push_back(1.0);

    fields::EvolveOptions<double> eo;
    eo.n_steps = n_steps;
    eo.retain_history = spec.beta == 1.0 || spec.beta == 2.0 ? false : true;
    eo.observer = [&](std::size_t level, const fields::FieldState& st) {
        if (level % stride == 0 || level == n_steps) {
            run.times.push_back(st.time(level));
            run.ratio.push_back(mode_amplitude(st.history.back(), cs, sn) / a0);
        }
    };
    const auto symbol = interaction_symbol(spec);
    fields::evolve_with_symbol(stepping_model(spec), symbol, chain_initial(spec, opt.dt, u0, v0), spec.beta, eo);
    return run;
}

double fit_rate(const ModeRun& run, double beta)
{
    const std::size_t n = run.times.size();
    const double T = run.times.back();
    const double r = run.ratio.back();
    if (!(r > 0.0)) throw NumericalError("fit failure: mode amplitude vanished");
    if (beta == 1.0) return std::log(r) / T;

    bool up = true, down = true;
    for (std::size_t i = 1; i < n; ++i) {
        up = up && run.ratio[i] >= run.ratio[i - 1];
        down = down && run.ratio[i] <= run.ratio[i - 1];
    }
    if (beta < 1.0 && !up && !down) throw NumericalError("fit failure: non-monotone mode amplitude");

    // initial guess from E_b(z) ~ 1 + z / G(1+b)
    const double guess = (r - 1.0) * std::tgamma(1.0 + beta) / std::pow(T, beta);
    const double span = 10.0 * std::abs(guess) + 1e-12;
    auto sse = [&](double lam) {
        double s = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double e = run.ratio[i] - fracops::mittag_leffler(beta, lam * std::pow(run.times[i], beta));
            s += e * e;
        }
        return s;
    };
    const auto best = boost::math::tools::brent_find_minima(sse, guess - span, guess + span, 52);
    return best.first;
}

} // namespace

void ChainSpec::validate() const
{
    if (n_particles < 8) throw ValidationError("chain needs at least 8 particles", "n_particles");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ValidationError("dx must be positive", "dx");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("coupling exponent must be positive", "alpha");
    if (!std::isfinite(g0)) throw ValidationError("g0 must be finite", "g0");
    require_caputo_order(beta);
    if (coupling_cutoff > n_particles / 2) {
        throw ValidationError("coupling cutoff exceeds half the ring", "coupling_cutoff");
    }
    stepping_model(*this).validate();
}

std::size_t ChainSpec::cutoff() const
{
    if (nearest_neighbour) return 1;
    return coupling_cutoff == 0 ? n_particles / 2 : coupling_cutoff;
}

GridSpec ChainSpec::grid() const { return GridSpec(n_particles, static_cast<double>(n_particles) * dx); }

ChainState chain_initial(const ChainSpec& spec, double dt, std::vector<double> u0, std::vector<double> v0)
{
    spec.validate();
    return ChainState::initial(spec.grid(), dt, std::move(u0), std::move(v0));
}

std::vector<double> ring_coupling(const ChainSpec& spec)
{
    spec.validate();
    const std::size_t N = spec.n_particles;
    const std::size_t cut = spec.cutoff();
    std::vector<double> c(N, 0.0);
    for (std::size_t j = 1; j < N; ++j) {
        const std::size_t d = std::min(j, N - j);
        if (d <= cut) c[j] = spec.nearest_neighbour ? 1.0 : kernels::lattice_coupling(spec.alpha, static_cast<long>(d));
    }
    return c;
}

std::vector<double> interaction_symbol(const ChainSpec& spec)
{
    const auto c = ring_coupling(spec);
    const auto ch = FourierTransform::of_size(c.size())->forward(std::span<const double>(c));
    double total = 0.0;
    for (double v : c) total += v;
    std::vector<double> s(c.size());
    for (std::size_t m = 0; m < c.size(); ++m) s[m] = spec.g0 * (ch[m].real() - total);
    return s;
}

std::vector<double> interaction_sum(const ChainSpec& spec, std::span<const double> f)
{
    const std::size_t N = spec.n_particles;
    if (f.size() != N) throw ValidationError("values do not match the particle count", "n_particles");
    require_finite(f, "interaction_sum");
    const auto c = ring_coupling(spec);
    const auto fft = FourierTransform::of_size(N);
    auto ch = fft->forward(std::span<const double>(c));
    const auto fh = fft->forward(f);
    for (std::size_t m = 0; m < N; ++m) ch[m] *= fh[m];
    const auto conv = fft->backward(ch);
    double total = 0.0;
    for (double v : c) total += v;
    // (c * f)_n sums c_{n-m} f_m; c is symmetric on the ring
    std::vector<double> out(N);
    for (std::size_t n = 0; n < N; ++n) out[n] = spec.g0 * (conv[n].real() - total * f[n]);
    return out;
}

std::vector<double> interaction_sum_direct(const ChainSpec& spec, std::span<const double> f)
{
    const std::size_t N = spec.n_particles;
    if (f.size() != N) throw ValidationError("values do not match the particle count", "n_particles");
    const auto c = ring_coupling(spec);
    std::vector<double> out(N, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        double s = 0.0;
        for (std::size_t m = 0; m < N; ++m) {
            if (m == n) continue;
            s += c[(m + N - n) % N] * (f[m] - f[n]);
        }
        out[n] = spec.g0 * s;
    }
    return out;
}

ChainState evolve_chain(const ChainSpec& spec, ChainState state, std::size_t n_steps,
                        const fields::StepObserver<double>& observer)
{
    spec.validate();
    if (!(state.grid == spec.grid())) throw ValidationError("state does not match the chain", "n_particles");
    fields::EvolveOptions<double> eo;
    eo.n_steps = n_steps;
    eo.observer = observer;
    return fields::evolve_with_symbol(stepping_model(spec), interaction_symbol(spec), std::move(state), spec.beta,
                                      eo);
}

std::vector<cplx> chain_fourier(std::span<const double> u, double dx)
{
    if (!(dx > 0.0)) throw ValidationError("dx must be positive", "dx");
    if (u.empty()) throw ValidationError("no particles", "n_particles");
    return FourierTransform::of_size(u.size())->forward(u);
}

std::vector<double> chain_inverse(std::span<const cplx> modes, double dx)
{
    if (!(dx > 0.0)) throw ValidationError("dx must be positive", "dx");
    if (modes.empty()) throw ValidationError("no modes", "n_particles");
    const auto z = FourierTransform::of_size(modes.size())->backward(modes);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
    return out;
}

ContinuumReport continuum_limit_compare(const ChainSpec& spec, std::span<const double> k_list,
                                        const CompareOptions& opt)
{
    spec.validate();
    if (k_list.empty()) throw ValidationError("no wavenumbers requested", "k");
    if (!(opt.dt > 0.0)) throw ValidationError("dt must be positive", "dt");
    const auto& f = spec.forces;
    if (f.interaction != fields::Interaction::identity) {
        throw ValidationError("comparison needs the identity interaction", "interaction");
    }
    const bool linear_force = f.potential == fields::Potential::none ||
                              (f.potential == fields::Potential::ginzburg_landau && f.b == 0.0);
    if (!linear_force) throw ValidationError("comparison needs F = 0 or F = a u", "potential");
    const double a = f.potential == fields::Potential::none ? 0.0 : f.a;

    ContinuumReport rep;
    rep.alpha = spec.nearest_neighbour ? 2.0 : spec.alpha;
    rep.beta = spec.beta;
    if (spec.nearest_neighbour) {
        rep.g_alpha = -spec.g0 * spec.dx * spec.dx;
    } else {
        if (!(spec.alpha > 1.0 && spec.alpha < 2.0)) {
            throw ValidationError("continuum constant needs alpha in (1,2)", "alpha");
        }
        rep.g_alpha = kernels::renormalized_constant(spec.alpha, spec.g0, spec.dx);
        rep.tail_bound = kernels::lattice_tail_bound(spec.alpha, spec.cutoff());
    }

    const GridSpec grid = spec.grid();
    const double L = grid.length();
    const std::size_t N = spec.n_particles;
    for (double k : k_list) {
        if (!(k > 0.0)) throw ValidationError("wavenumbers must be positive", "k");
        if (k * spec.dx > opt.max_kdx) throw ValidationError("k dx outside the asymptotic regime", "k");
        const auto m = static_cast<std::size_t>(std::llround(k * L / (2.0 * kPi)));
        if (m == 0 || m >= N / 2) throw ValidationError("k does not resolve to a ring mode", "k");
        ContinuumRow row;
        row.mode = m;
        row.k = grid.wavenumbers()[m];
        row.kdx = row.k * spec.dx;
        if (spec.nearest_neighbour) {
            row.predicted_rate = spec.g0 * row.kdx * row.kdx - a;
        } else {
            row.predicted_rate = -rep.g_alpha * std::pow(row.k, spec.alpha) - a;
        }
        rep.rows.push_back(row);
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < rep.rows.size(); i = next++) {
            try {
                auto& row = rep.rows[i];
                double T = opt.horizon;
                if (T <= 0.0) T = std::pow(0.5 / std::max(std::abs(row.predicted_rate), 1e-12), 1.0 / spec.beta);
                const auto run = run_mode(spec, row.mode, T, opt);
                row.measured_rate = fit_rate(run, spec.beta);
                row.relative_deviation =
                    std::abs(row.measured_rate - row.predicted_rate) / std::abs(row.predicted_rate);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t nt = std::max<std::size_t>(1, std::min(opt.threads, rep.rows.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    if (rep.rows.size() >= 2) {
        std::vector<double> lx, ly;
        for (const auto& r : rep.rows) {
            lx.push_back(std::log(r.k));
            ly.push_back(std::log(std::abs(r.measured_rate + a)));
        }
        rep.fitted_power = least_squares_slope(lx, ly);
    }
    return rep;
}

} // namespace fracdyn::chain
