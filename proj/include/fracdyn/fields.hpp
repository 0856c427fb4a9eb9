// Fractional field equations on a periodic 1-D grid.
//
// The generic equation, with Caputo order beta in the time derivative and
// Riesz derivatives R_s (Fourier symbol -|k|^s) in space, reads
//
//   g0 D^beta u + sum_s c_s R_s f(u) + F(u) + q(t, x) = 0,
//
// where F = dU/du is the on-site force, f the interaction function and q an
// optional source. The equation is stepped as written: only the causal (left)
// Caputo derivative enters the time stepping; g0' is honoured by `residual`.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracdyn/types.hpp"

namespace fracdyn::fields {

enum class Potential { none, ginzburg_landau, sine_gordon, custom };
enum class Interaction { identity, square, quadratic_mix, custom };
enum class FieldKind { real, complex };

struct SpatialTerm {
    double order = 2.0;
    double coefficient = 0.0;

    bool operator==(const SpatialTerm&) const = default;
};

struct ModelSpec {
    double g0 = 1.0;
    double g0_prime = 0.0;
    std::vector<SpatialTerm> spatial_terms;
    double a = 0.0;
    double b = 0.0;
    Potential potential = Potential::none;
    Interaction interaction = Interaction::identity;
    double interaction_g = 0.0; // g in f(u) = u - g u^2
    FieldKind field_kind = FieldKind::real;

    std::function<double(double)> custom_force;       // F(u) for Potential::custom
    std::function<double(double)> custom_interaction; // f(u) for Interaction::custom
    double custom_interaction_slope = 0.0;            // f'(0) for Interaction::custom
    std::function<double(double, double)> source;     // q(t, x), optional

    // Balance form, all terms on one side:  g0 D u + g R_a u + a u + b u^3 = 0.
    static ModelSpec ginzburg_landau(double alpha, double g, double a, double b, double g0 = 1.0);
    // Gradient-flow form  D u = g R_a u + a u + b u^3.
    static ModelSpec fgle_flow(double alpha, double g, double a, double b);
    // D^(beta+1) u - R_a u + sin u = 0.
    static ModelSpec sine_gordon(double alpha);
    // Linear equation g0 D u + c R_a u = 0.
    static ModelSpec linear(double alpha, double coefficient, double g0 = 1.0);

    void validate() const;

    double force(double u) const;
    cplx force(cplx u) const;
    double potential_energy(double u) const;
    double interaction_value(double u) const;
    cplx interaction_value(cplx u) const;
    double interaction_slope() const;

    // sum_s c_s (-|k_m|^s) in FFT order: the Fourier multiplier of the spatial
    // terms acting on f(u).
    std::vector<double> spatial_symbol(const GridSpec& grid) const;
};

// Field samples at every completed time level.
template <class T>
struct FieldStateT {
    GridSpec grid;
    double dt;
    std::vector<std::vector<T>> history;  // history[j][i] = u(t_j, x_i)
    std::vector<T> initial_velocity;      // required for Caputo order in (1,2]
    bool full_history = true;             // false: rows older than the scheme needs were released

    static FieldStateT initial(const GridSpec& grid, double dt, std::vector<T> u0, std::vector<T> v0 = {});

    std::size_t levels() const noexcept { return history.size(); }
    double time(std::size_t j) const noexcept { return static_cast<double>(j) * dt; }
    const std::vector<T>& current() const { return history.back(); }
    TimeGrid time_grid() const { return TimeGrid(levels() > 1 ? levels() - 1 : 1, dt); }
};

using FieldState = FieldStateT<double>;
using ComplexFieldState = FieldStateT<cplx>;

template <class T>
using StepObserver = std::function<void(std::size_t level, const FieldStateT<T>& state)>;

template <class T>
struct EvolveOptions {
    std::size_t n_steps = 1;
    // Abort when max|u| grows by more than this factor in one step.
    double blowup_factor = 1e3;
    // max|u| values below this floor are not considered for the growth test.
    double blowup_floor = 1e-12;
    // Keep every level (needed by `residual` and by fractional orders).
    // Only integer orders may drop old levels.
    bool retain_history = true;
    // Real fields only: the spatial operator acts on u - slope * x, which
    // carries a kink's 2 pi winding on a periodic grid.
    double background_slope = 0.0;
    StepObserver<T> observer;
};

// Semi-implicit L1 pseudo-spectral stepping of the generic equation:
// Caputo history explicit except its newest-level weight, linear spatial
// terms implicit in Fourier space, F(u), the source and the nonlinear part of
// R f(u) explicit. beta in (0,1) U (1,2) and the classical values 1, 2.
FieldState evolve_field(const ModelSpec& model, FieldState state, double beta, const EvolveOptions<double>& options);
ComplexFieldState evolve_field(const ModelSpec& model, ComplexFieldState state, double beta,
                               const EvolveOptions<cplx>& options);

// Same scheme with the spatial operator given directly by its Fourier
// multiplier (FFT order); model.spatial_terms are ignored.
FieldState evolve_with_symbol(const ModelSpec& model, std::span<const double> symbol, FieldState state, double beta,
                              const EvolveOptions<double>& options);

// D^(beta+1) u - R_alpha u + sin u = 0 with beta+1 in (1,2]. Needs u and u_t at t = 0.
FieldState evolve_sine_gordon(FieldState state, double alpha, double beta_plus_one,
                              const EvolveOptions<double>& options);

// Sine-Gordon energy  sum dx [ v^2/2 + w (-Lap)^(a/2) w / 2 + (1 - cos u) ] + s^2 L / 2
// with w = u - s x the periodic part and v = (u^{n+1} - u^{n-1}) / (2 dt).
double sine_gordon_energy(const FieldState& state, std::size_t level, double alpha, double background_slope = 0.0);

// ------------------------------------------------------------------ NLS

struct NlsParams {
    double alpha = 2.0;
    double g = 1.0;
    double a = 0.0;
    double b = 0.0;
};

// One Strang split step of  i u_t = -g (-Lap)^(a/2) u + a u + b |u|^2 u:
// half nonlinear phase exp(-i (a + b|u|^2) dt/2), exact linear step
// exp(+i g |k|^alpha dt), half nonlinear phase.
ComplexFieldState nls_step(ComplexFieldState state, const NlsParams& params);
ComplexFieldState evolve_nls(ComplexFieldState state, const NlsParams& params, std::size_t n_steps,
                             bool retain_history = true);

// u0 E_beta(i(-g|k|^alpha + a) t^beta): the single-mode solution of
// D^beta u = i(-g|k|^alpha + a) u with a Caputo time derivative, beta in (0,1].
cplx nls_linear_mode_evolution(double alpha, double beta, double g, double a, double k, cplx u0, double t);

// ------------------------------------------------------------ stationary

struct FgleParams {
    double alpha = 2.0;
    double g = 1.0;
    double a = 0.0;
    double b = 0.0;

    // Takes the first spatial term of a Ginzburg-Landau model.
    static FgleParams from_model(const ModelSpec& model);
};

// R(u) = g R_alpha u + a u + b u^3.
std::vector<double> fgle_residual(std::span<const double> u, const GridSpec& grid, const FgleParams& p);

struct NewtonOptions {
    double tolerance = 1e-10;
    int max_iterations = 100;
    // Eigenvalues of the Jacobian below this fraction of the largest are
    // treated as null directions (e.g. translations of a kink).
    double null_threshold = 1e-10;
};

struct NewtonResult {
    std::vector<double> u;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::size_t null_directions = 0;
};

// Damped Newton on R(u) = 0; the Jacobian g R_alpha + diag(a + 3 b u^2) is
// assembled from the spectral operator and solved through its symmetric
// eigen-decomposition. Steps are halved while the residual increases.
// Returns the best iterate; `converged` is false after max_iterations.
NewtonResult stationary_fgle_solve(const GridSpec& grid, const FgleParams& p, std::span<const double> initial_guess,
                                   const NewtonOptions& options = {});

// F[u] - F0 = (g/2) sum dx u R_alpha u + sum dx (a u^2/2 + b u^4/4),
// the functional whose gradient is dx * (g R_alpha u + a u + b u^3).
double free_energy(std::span<const double> u, const GridSpec& grid, const FgleParams& p);

// ------------------------------------------------------------- residual

// g0 D_left u + g0' D_right u + sum_s c_s R_s f(u) + F(u) + q on every level
// of a completed trajectory; result[j][i] at (t_j, x_i).
std::vector<std::vector<double>> residual(const ModelSpec& model, const FieldState& state, double beta);

} // namespace fracdyn::fields
