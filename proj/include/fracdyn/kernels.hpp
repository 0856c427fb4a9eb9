// Power-law memory and interaction kernels, the lattice coupling
// J_a(n) = 1/|n|^(a+1) with its Fourier symbol, and the renormalized
// constant that carries the lattice coupling into the continuum equation.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracdyn/types.hpp"

namespace fracdyn::kernels {

enum class MemorySupport {
    left_only,            // M(t - t') on 0 < t' < t
    two_sided,            // plus M'(t' - t) on the future side
    integrated_left,      // kernel is K0 itself: Caputo order beta + 1
    integrated_two_sided,
};

struct MemoryKernel {
    double beta = 0.5;
    double g0 = 1.0;
    double g0_prime = 0.0;
    MemorySupport support = MemorySupport::left_only;
    bool delta = false; // memoryless limit M(t) = delta(t)

    static MemoryKernel power_law(double beta, double g0, MemorySupport support = MemorySupport::left_only,
                                  double g0_prime = 0.0);
    static MemoryKernel markovian();

    // M(t) = g0 t^-b / G(1-b) for t > 0; on the future side (t < 0) of a
    // two-sided kernel, M'(|t|) = -g0' |t|^-b / G(1-b). Zero elsewhere.
    double value(double t) const;

    // Order of the Caputo derivative this kernel produces.
    double caputo_order() const;
};

// Z(t_j) = int_0^t_j M(t_j - t') u'(t') dt' with u' piecewise constant,
// du_dt[i] being the slope on (t_{i-1}, t_i]. For the power-law kernel the
// product-integration weights are exactly the L1 weights, so the result is
// g0 * caputo_left_l1(u) bit for bit. Two-sided kernels add the mirrored
// future part g0' * (right derivative). The delta kernel returns du_dt.
std::vector<double> memory_convolution(const MemoryKernel& kernel, std::span<const double> du_dt, double dt);

// C(|r|) = -g1 / (cos(pi a/2) G(2-a)) |r|^(1-a), a in (1,2).
struct InteractionKernel {
    double alpha = 1.5;
    double g1 = 1.0;

    double value(double r) const;
};

// J_a(n) = 1/|n|^(a+1), n != 0.
double lattice_coupling(double alpha, long n);

// Upper bound 2 N^-a / a on the neglected tail 2 sum_{n>N} n^-(a+1).
double lattice_tail_bound(double alpha, std::size_t cutoff);
// Smallest cutoff whose tail bound is below `tolerance`.
std::size_t lattice_cutoff_for(double alpha, double tolerance = 1e-10);

// zeta(s), s > 1: direct summation of 1000 terms plus the Euler-Maclaurin tail.
double riemann_zeta(double s);

// J^_a(k) = sum_{0<|n|<=N} e^{-i k n dx} / |n|^(a+1) = 2 sum_{n=1..N} cos(k n dx) / n^(a+1).
// Throws ValidationError when lattice_tail_bound(alpha, cutoff) >= tolerance.
double lattice_symbol(double alpha, double k, double dx, std::size_t cutoff, double tolerance = 1e-10);
// J^_a(k) - J^_a(0) = -4 sum_{n=1..N} sin^2(k n dx / 2) / n^(a+1), free of cancellation.
double lattice_symbol_difference(double alpha, double k, double dx, std::size_t cutoff, double tolerance = 1e-10);

// Small-|k dx| coefficient of J^_a(k) - J^_a(0) ~ A_a |k dx|^a:  A_a = 2 G(-a) cos(pi a / 2).
double continuum_coefficient(double alpha);

// g_a = 2 g0 dx^a G(-a) cos(pi a / 2), alpha in (1,2).
double renormalized_constant(double alpha, double g0, double dx);

} // namespace fracdyn::kernels
