#include "fracdyn/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

#include "fracdyn/caputo_scheme.hpp"
#include "fracdyn/fft.hpp"
#include "fracdyn/fracops.hpp"

namespace fracdyn::fields {

namespace {

double max_abs(std::span<const double> u)
{
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(std::span<const cplx> u)
{
    double m = 0.0;
    for (const cplx& v : u) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(std::span<const double> u)
{
    return std::all_of(u.begin(), u.end(), [](double v) { return std::isfinite(v); });
}

bool all_finite(std::span<const cplx> u)
{
    return std::all_of(u.begin(), u.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

template <class T>
T from_complex(const cplx& v)
{
    if constexpr (std::is_same_v<T, double>) {
        return v.real();
    } else {
        return v;
    }
}

bool is_integer_order(double beta) { return beta == 1.0 || beta == 2.0; }

template <class T>
void check_state(const FieldStateT<T>& state)
{
    if (state.history.empty()) throw ValidationError("field state has no levels", "history");
    if (!(state.dt > 0.0) || !std::isfinite(state.dt)) throw ValidationError("dt must be positive", "dt");
    const std::size_t n = state.grid.n_points();
    if (state.history.back().size() != n) throw ValidationError("samples do not match the grid", "n_points");
}

template <class T>
FieldStateT<T> evolve_impl(const ModelSpec& model, std::vector<double> S, FieldStateT<T> st, double beta,
                           const EvolveOptions<T>& opt)
{
    model.validate();
    require_caputo_order(beta);
    check_state(st);
    if (model.g0 == 0.0) throw ValidationError("g0 must be nonzero for time stepping", "g0");
    if (model.g0_prime != 0.0) {
        throw ValidationError("the right Caputo derivative is acausal and cannot be stepped; set g0_prime = 0",
                              "g0_prime");
    }
    if constexpr (std::is_same_v<T, double>) {
        if (model.field_kind != FieldKind::real) throw ValidationError("model expects a complex field", "field_kind");
    } else {
        if (opt.background_slope != 0.0) {
            throw ValidationError("background slope applies to real fields only", "background_slope");
        }
    }
    if (!(opt.blowup_factor > 1.0)) throw ValidationError("blow-up factor must exceed 1", "blowup_factor");
    if (!opt.retain_history && !is_integer_order(beta)) {
        throw ValidationError("a fractional order needs the full history", "retain_history");
    }
    if (!st.full_history && !is_integer_order(beta)) {
        throw ValidationError("state has released history rows; a fractional order needs all of them", "history");
    }

    const std::size_t N = st.grid.n_points();
    if (beta > 1.0 && st.initial_velocity.size() != N) {
        throw ValidationError("Caputo order above 1 needs an initial velocity on every node", "initial_velocity");
    }
    if (opt.n_steps == 0) return st;

    const std::size_t start = st.history.size();
    const std::size_t last = start - 1 + opt.n_steps;
    const CaputoScheme scheme(beta, st.dt, last);
    const auto fft = FourierTransform::of_size(N);

    if (S.empty()) S = model.spatial_symbol(st.grid);
    if (S.size() != N) throw ValidationError("symbol does not match the grid", "n_points");
    require_finite(std::span<const double>(S), "spatial symbol");
    const double slope = model.interaction_slope();
    std::vector<double> L(N);
    for (std::size_t m = 0; m < N; ++m) L[m] = S[m] * slope;
    const bool nonlinear_interaction = model.interaction != Interaction::identity;
    const bool has_spatial = std::any_of(S.begin(), S.end(), [](double s) { return s != 0.0; });

    std::vector<double> bg(N, 0.0);
    if constexpr (std::is_same_v<T, double>) {
        for (std::size_t i = 0; i < N; ++i) bg[i] = opt.background_slope * st.grid.x(i);
    }

    std::vector<T> H(N);
    std::vector<cplx> work(N), rhs_hat(N), nl_hat(N), w_hat(N), w1_hat(N), w2_hat(N), out(N);

    auto periodic_hat = [&](const std::vector<T>& row, std::vector<cplx>& dst) {
        for (std::size_t i = 0; i < N; ++i) work[i] = cplx(row[i]) - bg[i];
        fft->forward(work, dst);
    };

    double prev_max = max_abs(std::span<const T>(st.history.back()));
    std::size_t released = 0;
    while (released < start && st.history[released].empty()) ++released;

    for (std::size_t n = start; n <= last; ++n) {
        const double c_new = scheme.new_level_coefficient(n);
        const auto lw = scheme.linear_weights(n);
        const std::size_t e = scheme.explicit_level(n);
        const double tc = scheme.collocation_level(n) * st.dt;

        scheme.history_part<T>(n, std::span<const std::vector<T>>(st.history),
                               std::span<const T>(st.initial_velocity), std::span<T>(H));

        const auto& ue = st.history[e];
        for (std::size_t i = 0; i < N; ++i) {
            cplx r = model.g0 * (cplx(H[i]) + c_new * bg[i]);
            r += cplx(model.force(ue[i]));
            if (model.source) r += model.source(tc, st.grid.x(i));
            work[i] = r;
        }
        fft->forward(work, rhs_hat);

        if (nonlinear_interaction && has_spatial) {
            for (std::size_t i = 0; i < N; ++i) {
                const T w = ue[i] - static_cast<T>(bg[i]);
                work[i] = cplx(model.interaction_value(w) - slope * w);
            }
            fft->forward(work, nl_hat);
            for (std::size_t m = 0; m < N; ++m) rhs_hat[m] += S[m] * nl_hat[m];
        }

        if (has_spatial && lw.previous != 0.0) {
            periodic_hat(st.history[n - 1], w1_hat);
            for (std::size_t m = 0; m < N; ++m) rhs_hat[m] += L[m] * lw.previous * w1_hat[m];
        }
        if (has_spatial && lw.before_previous != 0.0) {
            periodic_hat(st.history[n - 2], w2_hat);
            for (std::size_t m = 0; m < N; ++m) rhs_hat[m] += L[m] * lw.before_previous * w2_hat[m];
        }

        for (std::size_t m = 0; m < N; ++m) {
            const double denom = model.g0 * c_new + lw.newest * L[m];
            if (std::abs(denom) < 1e-300) throw NumericalError("singular implicit operator at mode " + std::to_string(m));
            w_hat[m] = -rhs_hat[m] / denom;
        }
        fft->backward(w_hat, out);

        std::vector<T> next(N);
        for (std::size_t i = 0; i < N; ++i) next[i] = from_complex<T>(out[i]) + static_cast<T>(bg[i]);

        if (!all_finite(std::span<const T>(next))) {
            throw NumericalError("non-finite field at step " + std::to_string(n) + ", t = " + std::to_string(n * st.dt));
        }
        const double now_max = max_abs(std::span<const T>(next));
        if (prev_max > opt.blowup_floor && now_max > opt.blowup_factor * prev_max) {
            throw NumericalError("blow-up at step " + std::to_string(n) + ": max|u| grew from " +
                                 std::to_string(prev_max) + " to " + std::to_string(now_max));
        }
        prev_max = now_max;
        st.history.push_back(std::move(next));

        if (!opt.retain_history) {
            // keep three rows: the next step reads two, centred energies read three
            while (released + 4 <= st.history.size()) {
                std::vector<T>().swap(st.history[released]);
                ++released;
                st.full_history = false;
            }
        }
        if (opt.observer) opt.observer(n, st);
    }
    return st;
}

} // namespace

// ------------------------------------------------------------------ model

ModelSpec ModelSpec::ginzburg_landau(double alpha, double g, double a, double b, double g0)
{
    ModelSpec m;
    m.g0 = g0;
    m.spatial_terms = {{alpha, g}};
    m.a = a;
    m.b = b;
    m.potential = Potential::ginzburg_landau;
    return m;
}

ModelSpec ModelSpec::fgle_flow(double alpha, double g, double a, double b)
{
    ModelSpec m;
    m.g0 = 1.0;
    m.spatial_terms = {{alpha, -g}};
    m.a = -a;
    m.b = -b;
    m.potential = Potential::ginzburg_landau;
    return m;
}

ModelSpec ModelSpec::sine_gordon(double alpha)
{
    ModelSpec m;
    m.g0 = 1.0;
    m.spatial_terms = {{alpha, -1.0}};
    m.potential = Potential::sine_gordon;
    return m;
}

ModelSpec ModelSpec::linear(double alpha, double coefficient, double g0)
{
    ModelSpec m;
    m.g0 = g0;
    m.spatial_terms = {{alpha, coefficient}};
    m.potential = Potential::none;
    return m;
}

void ModelSpec::validate() const
{
    if (!std::isfinite(g0)) throw ValidationError("g0 must be finite", "g0");
    if (!std::isfinite(g0_prime)) throw ValidationError("g0_prime must be finite", "g0_prime");
    if (!std::isfinite(a)) throw ValidationError("a must be finite", "a");
    if (!std::isfinite(b)) throw ValidationError("b must be finite", "b");
    if (!std::isfinite(interaction_g)) throw ValidationError("interaction g must be finite", "interaction_g");
    for (const auto& t : spatial_terms) {
        require_spatial_order(t.order, "order");
        if (!std::isfinite(t.coefficient)) throw ValidationError("spatial coefficient must be finite", "coefficient");
    }
    if (potential == Potential::custom && !custom_force) {
        throw ValidationError("custom potential needs a force callback", "potential");
    }
    if (interaction == Interaction::custom && !custom_interaction) {
        throw ValidationError("custom interaction needs a callback", "interaction");
    }
    if (field_kind == FieldKind::complex &&
        (potential == Potential::custom || interaction == Interaction::custom)) {
        throw ValidationError("custom callbacks are real-valued; complex fields need built-in terms", "field_kind");
    }
}

double ModelSpec::force(double u) const
{
    switch (potential) {
    case Potential::none: return 0.0;
    case Potential::ginzburg_landau: return a * u + b * u * u * u;
    case Potential::sine_gordon: return std::sin(u);
    case Potential::custom: return custom_force(u);
    }
    return 0.0;
}

cplx ModelSpec::force(cplx u) const
{
    switch (potential) {
    case Potential::none: return 0.0;
    case Potential::ginzburg_landau: return a * u + b * std::norm(u) * u;
    case Potential::sine_gordon: return std::sin(u);
    case Potential::custom: throw ValidationError("custom force is real-valued", "potential");
    }
    return 0.0;
}

double ModelSpec::potential_energy(double u) const
{
    switch (potential) {
    case Potential::none: return 0.0;
    case Potential::ginzburg_landau: return a * u * u / 2.0 + b * u * u * u * u / 4.0;
    case Potential::sine_gordon: return -std::cos(u);
    case Potential::custom: throw ValidationError("custom potential has no energy callback", "potential");
    }
    return 0.0;
}

double ModelSpec::interaction_value(double u) const
{
    switch (interaction) {
    case Interaction::identity: return u;
    case Interaction::square: return u * u;
    case Interaction::quadratic_mix: return u - interaction_g * u * u;
    case Interaction::custom: return custom_interaction(u);
    }
    return u;
}

cplx ModelSpec::interaction_value(cplx u) const
{
    switch (interaction) {
    case Interaction::identity: return u;
    case Interaction::square: return u * u;
    case Interaction::quadratic_mix: return u - interaction_g * u * u;
    case Interaction::custom: throw ValidationError("custom interaction is real-valued", "interaction");
    }
    return u;
}

double ModelSpec::interaction_slope() const
{
    switch (interaction) {
    case Interaction::identity: return 1.0;
    case Interaction::square: return 0.0;
    case Interaction::quadratic_mix: return 1.0;
    case Interaction::custom: return custom_interaction_slope;
    }
    return 1.0;
}

std::vector<double> ModelSpec::spatial_symbol(const GridSpec& grid) const
{
    std::vector<double> s(grid.n_points(), 0.0);
    for (const auto& t : spatial_terms) {
        const auto r = fracops::riesz_symbol(t.order, grid);
        for (std::size_t m = 0; m < s.size(); ++m) s[m] += t.coefficient * r[m];
    }
    return s;
}

template <class T>
FieldStateT<T> FieldStateT<T>::initial(const GridSpec& grid, double dt, std::vector<T> u0, std::vector<T> v0)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive", "dt");
    if (u0.size() != grid.n_points()) throw ValidationError("initial field does not match the grid", "n_points");
    if (!v0.empty() && v0.size() != grid.n_points()) {
        throw ValidationError("initial velocity does not match the grid", "initial_velocity");
    }
    require_finite(std::span<const T>(u0), "initial field");
    require_finite(std::span<const T>(v0), "initial velocity");
    FieldStateT s{grid, dt, {}, std::move(v0), true};
    s.history.push_back(std::move(u0));
    return s;
}

template struct FieldStateT<double>;
template struct FieldStateT<cplx>;

// --------------------------------------------------------------- stepping

FieldState evolve_field(const ModelSpec& model, FieldState state, double beta, const EvolveOptions<double>& options)
{
    return evolve_impl(model, {}, std::move(state), beta, options);
}

FieldState evolve_with_symbol(const ModelSpec& model, std::span<const double> symbol, FieldState state, double beta,
                              const EvolveOptions<double>& options)
{
    if (symbol.empty()) throw ValidationError("empty spatial symbol", "symbol");
    return evolve_impl(model, std::vector<double>(symbol.begin(), symbol.end()), std::move(state), beta, options);
}

ComplexFieldState evolve_field(const ModelSpec& model, ComplexFieldState state, double beta,
                               const EvolveOptions<cplx>& options)
{
    if (model.field_kind != FieldKind::complex) {
        ModelSpec m = model;
        m.field_kind = FieldKind::complex;
        return evolve_impl(m, {}, std::move(state), beta, options);
    }
    return evolve_impl(model, {}, std::move(state), beta, options);
}

FieldState evolve_sine_gordon(FieldState state, double alpha, double beta_plus_one,
                              const EvolveOptions<double>& options)
{
    if (!(beta_plus_one > 1.0 && beta_plus_one <= 2.0)) {
        throw ValidationError("sine-Gordon time order must lie in (1,2]", "beta");
    }
    require_spatial_order(alpha);
    return evolve_field(ModelSpec::sine_gordon(alpha), std::move(state), beta_plus_one, options);
}

double sine_gordon_energy(const FieldState& state, std::size_t level, double alpha, double background_slope)
{
    require_spatial_order(alpha);
    if (level == 0 || level + 1 >= state.history.size()) {
        throw ValidationError("energy needs the levels on both sides of the requested one", "level");
    }
    const auto& up = state.history[level + 1];
    const auto& u = state.history[level];
    const auto& lo = state.history[level - 1];
    const std::size_t N = state.grid.n_points();
    if (up.size() != N || u.size() != N || lo.size() != N) {
        throw ValidationError("energy needs retained history rows", "level");
    }
    const double dx = state.grid.dx();
    double kinetic = 0.0, onsite = 0.0;
    std::vector<cplx> w(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double v = (up[i] - lo[i]) / (2.0 * state.dt);
        kinetic += 0.5 * v * v;
        onsite += 1.0 - std::cos(u[i]);
        w[i] = u[i] - background_slope * state.grid.x(i);
    }
    const auto what = FourierTransform::of_size(N)->forward(w);
    const auto& k = state.grid.wavenumbers();
    double gradient = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
        if (k[m] != 0.0) gradient += std::pow(std::abs(k[m]), alpha) * std::norm(what[m]);
    }
    gradient *= 0.5 / static_cast<double>(N);
    return dx * (kinetic + onsite + gradient) + 0.5 * background_slope * background_slope * state.grid.length();
}

// -------------------------------------------------------------------- NLS

ComplexFieldState nls_step(ComplexFieldState state, const NlsParams& p)
{
    check_state(state);
    require_spatial_order(p.alpha);
    const std::size_t N = state.grid.n_points();
    const double dt = state.dt;
    const auto fft = FourierTransform::of_size(N);
    const auto& k = state.grid.wavenumbers();

    std::vector<cplx> u = state.history.back();
    auto half_phase = [&](std::vector<cplx>& v) {
        for (auto& z : v) z *= std::polar(1.0, -(p.a + p.b * std::norm(z)) * dt / 2.0);
    };
    half_phase(u);
    std::vector<cplx> uh(N);
    fft->forward(u, uh);
    for (std::size_t m = 0; m < N; ++m) {
        const double kk = k[m] == 0.0 ? 0.0 : std::pow(std::abs(k[m]), p.alpha);
        uh[m] *= std::polar(1.0, p.g * kk * dt);
    }
    fft->backward(uh, u);
    half_phase(u);

    if (!all_finite(std::span<const cplx>(u))) throw NumericalError("non-finite NLS amplitude");
    state.history.push_back(std::move(u));
    return state;
}

ComplexFieldState evolve_nls(ComplexFieldState state, const NlsParams& params, std::size_t n_steps,
                             bool retain_history)
{
    std::size_t released = 0;
    while (released + 1 < state.history.size() && state.history[released].empty()) ++released;
    for (std::size_t s = 0; s < n_steps; ++s) {
        state = nls_step(std::move(state), params);
        if (!retain_history) {
            while (released + 1 < state.history.size()) {
                std::vector<cplx>().swap(state.history[released]);
                ++released;
                state.full_history = false;
            }
        }
    }
    return state;
}

cplx nls_linear_mode_evolution(double alpha, double beta, double g, double a, double k, cplx u0, double t)
{
    require_spatial_order(alpha);
    if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("mode evolution needs beta in (0,1]", "beta");
    if (!(t >= 0.0)) throw ValidationError("time must be non-negative", "t");
    if (t == 0.0) return u0;
    const double lam = -g * std::pow(std::abs(k), alpha) + a;
    return u0 * fracops::mittag_leffler(beta, cplx(0.0, lam) * std::pow(t, beta));
}

// ------------------------------------------------------------- stationary

FgleParams FgleParams::from_model(const ModelSpec& model)
{
    if (model.potential != Potential::ginzburg_landau) {
        throw ValidationError("stationary solve needs the Ginzburg-Landau potential", "potential");
    }
    if (model.spatial_terms.empty()) throw ValidationError("model has no spatial term", "spatial_terms");
    return {model.spatial_terms.front().order, model.spatial_terms.front().coefficient, model.a, model.b};
}

std::vector<double> fgle_residual(std::span<const double> u, const GridSpec& grid, const FgleParams& p)
{
    auto r = fracops::riesz_derivative_spectral(u, p.alpha, grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.g * r[i] + p.a * u[i] + p.b * u[i] * u[i] * u[i];
    return r;
}

NewtonResult stationary_fgle_solve(const GridSpec& grid, const FgleParams& p, std::span<const double> initial_guess,
                                   const NewtonOptions& opt)
{
    require_spatial_order(p.alpha);
    if (p.a == 0.0 && p.b == 0.0) throw ValidationError("stationary solve needs a or b nonzero", "a");
    const std::size_t N = grid.n_points();
    if (initial_guess.size() != N) throw ValidationError("initial guess does not match the grid", "n_points");
    require_finite(initial_guess, "initial guess");

    // circulant g R_alpha: first column from the inverse transform of the symbol
    const auto sym = fracops::riesz_symbol(p.alpha, grid);
    std::vector<cplx> sc(sym.begin(), sym.end());
    const auto col = FourierTransform::of_size(N)->backward(sc);
    Eigen::MatrixXd R(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) R(i, j) = p.g * col[(i + N - j) % N].real();
    }

    auto norm_inf = [](const std::vector<double>& v) { return max_abs(std::span<const double>(v)); };

    NewtonResult res;
    res.u.assign(initial_guess.begin(), initial_guess.end());
    auto r = fgle_residual(res.u, grid, p);
    res.residual_norm = norm_inf(r);

    for (int it = 0; it < opt.max_iterations; ++it) {
        if (res.residual_norm < opt.tolerance) {
            res.converged = true;
            return res;
        }
        Eigen::MatrixXd J = R;
        for (std::size_t i = 0; i < N; ++i) J(i, i) += p.a + 3.0 * p.b * res.u[i] * res.u[i];
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
        if (eig.info() != Eigen::Success) throw NumericalError("Jacobian eigen-decomposition failed");
        const auto& lam = eig.eigenvalues();
        const auto& V = eig.eigenvectors();
        const double cut = opt.null_threshold * lam.cwiseAbs().maxCoeff();
        if (!(lam.cwiseAbs().maxCoeff() > 0.0)) throw NumericalError("Jacobian vanishes identically");

        const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(N));
        Eigen::VectorXd proj = V.transpose() * rv;
        std::size_t nulls = 0;
        for (Eigen::Index q = 0; q < proj.size(); ++q) {
            if (std::abs(lam(q)) <= cut) {
                proj(q) = 0.0;
                ++nulls;
            } else {
                proj(q) /= lam(q);
            }
        }
        res.null_directions = nulls;
        const Eigen::VectorXd step = -(V * proj);

        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h, lambda *= 0.5) {
            std::vector<double> trial(N);
            for (std::size_t i = 0; i < N; ++i) trial[i] = res.u[i] + lambda * step(static_cast<Eigen::Index>(i));
            auto rt = fgle_residual(trial, grid, p);
            const double nt = norm_inf(rt);
            if (std::isfinite(nt) && nt < res.residual_norm) {
                res.u = std::move(trial);
                r = std::move(rt);
                res.residual_norm = nt;
                accepted = true;
                break;
            }
        }
        res.iterations = it + 1;
        if (!accepted) break;
    }
    res.converged = res.residual_norm < opt.tolerance;
    return res;
}

double free_energy(std::span<const double> u, const GridSpec& grid, const FgleParams& p)
{
    require_spatial_order(p.alpha);
    const std::size_t N = grid.n_points();
    if (u.size() != N) throw ValidationError("samples do not match the grid", "n_points");
    require_finite(u, "free_energy");
    const auto uh = FourierTransform::of_size(N)->forward(u);
    const auto sym = fracops::riesz_symbol(p.alpha, grid);
    double quad = 0.0;
    for (std::size_t m = 0; m < N; ++m) quad += sym[m] * std::norm(uh[m]);
    quad /= static_cast<double>(N);
    double local = 0.0;
    for (double v : u) local += p.a * v * v / 2.0 + p.b * v * v * v * v / 4.0;
    return grid.dx() * (0.5 * p.g * quad + local);
}

// --------------------------------------------------------------- residual

std::vector<std::vector<double>> residual(const ModelSpec& model, const FieldState& state, double beta)
{
    model.validate();
    require_caputo_order(beta);
    check_state(state);
    if (!state.full_history) throw ValidationError("residual needs the full history", "history");
    const std::size_t N = state.grid.n_points();
    const std::size_t levels = state.history.size();
    if (levels < 3) throw ValidationError("residual needs at least 3 time levels", "history");
    if (beta > 1.0 && state.initial_velocity.size() != N) {
        throw ValidationError("Caputo order above 1 needs an initial velocity on every node", "initial_velocity");
    }
    const double dt = state.dt;

    std::vector<std::vector<double>> out(levels, std::vector<double>(N, 0.0));
    std::vector<double> series(levels);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < levels; ++j) series[j] = state.history[j][i];
        const double v0 = beta > 1.0 ? state.initial_velocity[i] : 0.0;
        const auto left = fracops::caputo_left(series, beta, dt, v0);
        std::vector<double> right;
        if (model.g0_prime != 0.0) {
            const double vt = (3.0 * series[levels - 1] - 4.0 * series[levels - 2] + series[levels - 3]) / (2.0 * dt);
            right = fracops::caputo_right(series, beta, dt, vt);
        }
        for (std::size_t j = 0; j < levels; ++j) {
            out[j][i] = model.g0 * left[j] + (right.empty() ? 0.0 : model.g0_prime * right[j]);
        }
    }

    const auto S = model.spatial_symbol(state.grid);
    std::vector<double> f(N);
    for (std::size_t j = 0; j < levels; ++j) {
        const auto& u = state.history[j];
        for (std::size_t i = 0; i < N; ++i) f[i] = model.interaction_value(u[i]);
        const auto sp = apply_symbol(std::span<const double>(f), S);
        const double t = state.time(j);
        for (std::size_t i = 0; i < N; ++i) {
            out[j][i] += sp[i] + model.force(u[i]);
            if (model.source) out[j][i] += model.source(t, state.grid.x(i));
        }
    }
    return out;
}

} // namespace fracdyn::fields
