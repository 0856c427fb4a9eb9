// Ring of oscillators with power-law long-range coupling and power-law memory:
//
//   D^beta u_n + g0 sum_{m != n} J_a(|n-m|) [f(u_m) - f(u_n)] + F(u_n) = 0,
//
// J_a(d) = 1/d^(a+1) on minimal-image distances d <= cutoff. The interaction
// carries no memory; only the time derivative does.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracdyn/fields.hpp"
#include "fracdyn/types.hpp"

namespace fracdyn::chain {

struct ChainSpec {
    std::size_t n_particles = 256;
    double dx = 1.0;
    double alpha = 1.5;
    double g0 = 1.0;
    double beta = 1.0;
    // 0 selects n_particles / 2.
    std::size_t coupling_cutoff = 0;
    // Keep only |n - m| = 1 (the classical discrete Laplacian).
    bool nearest_neighbour = false;
    // On-site force F and interaction f; spatial terms and g0 of this model are not used.
    fields::ModelSpec forces;

    void validate() const;
    std::size_t cutoff() const;
    GridSpec grid() const;
};

using ChainState = fields::FieldState;

ChainState chain_initial(const ChainSpec& spec, double dt, std::vector<double> u0, std::vector<double> v0 = {});

// c_j, j = 0..N-1: coupling to the particle j sites ahead on the ring; c_0 = 0.
std::vector<double> ring_coupling(const ChainSpec& spec);

// g0 (c^_m - c^_0): Fourier multiplier of the interaction acting on f.
std::vector<double> interaction_symbol(const ChainSpec& spec);

// g0 sum_m J(|n-m|) [f_m - f_n] for every n, by FFT circular convolution.
std::vector<double> interaction_sum(const ChainSpec& spec, std::span<const double> f);
// The same sum by the O(N^2) double loop.
std::vector<double> interaction_sum_direct(const ChainSpec& spec, std::span<const double> f);

// Same L1 / implicit-linear scheme as the field stepper.
ChainState evolve_chain(const ChainSpec& spec, ChainState state, std::size_t n_steps,
                        const fields::StepObserver<double>& observer = {});

// u^(k_m) = sum_n u_n exp(-i k_m x_n), x_n = n dx, and its exact inverse.
std::vector<cplx> chain_fourier(std::span<const double> u, double dx);
std::vector<double> chain_inverse(std::span<const cplx> modes, double dx);

struct CompareOptions {
    double dt = 0.01;
    // Integration horizon; 0 picks one with a measurable amplitude change.
    double horizon = 0.0;
    double amplitude = 1e-3;
    std::size_t fit_samples = 40;
    std::size_t threads = 1;
    double max_kdx = 0.2;
};

struct ContinuumRow {
    double k = 0.0;
    double kdx = 0.0;
    std::size_t mode = 0;
    double measured_rate = 0.0;
    double predicted_rate = 0.0;
    double relative_deviation = 0.0;
};

struct ContinuumReport {
    double alpha = 0.0;
    double beta = 1.0;
    double g_alpha = 0.0;
    double tail_bound = 0.0;
    std::vector<ContinuumRow> rows;
    double fitted_power = 0.0;
};

// Measures the rate lambda in  a_k(t) = a_k(0) E_beta(lambda t^beta)  for one
// chain mode per requested k (rounded to the nearest ring mode) and compares
// it with the continuum prediction  -g_a |k|^a - a  (nearest neighbour:
// g0 (k dx)^2 - a). beta = 1 uses the log amplitude ratio, other orders a
// least-squares fit against the Mittag-Leffler law. F must be linear.
ContinuumReport continuum_limit_compare(const ChainSpec& spec, std::span<const double> k_list,
                                        const CompareOptions& options = {});

} // namespace fracdyn::chain
