#include "fracdyn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracdyn/fracops.hpp"

namespace fracdyn::kernels {

namespace {

void require_lattice_alpha(double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("lattice coupling exponent must be positive", "alpha");
    }
}

void require_cutoff(double alpha, std::size_t cutoff, double tolerance)
{
    if (cutoff == 0) throw ValidationError("lattice cutoff must be positive", "cutoff");
    const double bound = lattice_tail_bound(alpha, cutoff);
    if (!(bound < tolerance)) {
        throw ValidationError("lattice cutoff " + std::to_string(cutoff) + " leaves a tail bound of " +
                                  std::to_string(bound) + ", above the tolerance",
                              "cutoff");
    }
}

} // namespace

MemoryKernel MemoryKernel::power_law(double beta, double g0, MemorySupport support, double g0_prime)
{
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ValidationError("power-law memory needs beta in (0,1)", "beta");
    }
    MemoryKernel k;
    k.beta = beta;
    k.g0 = g0;
    k.g0_prime = g0_prime;
    k.support = support;
    return k;
}

MemoryKernel MemoryKernel::markovian()
{
    MemoryKernel k;
    k.delta = true;
    k.beta = 1.0;
    return k;
}

double MemoryKernel::value(double t) const
{
    if (delta) return t == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    const double g = std::tgamma(1.0 - beta);
    if (t > 0.0) return g0 * std::pow(t, -beta) / g;
    const bool future = support == MemorySupport::two_sided || support == MemorySupport::integrated_two_sided;
    if (t < 0.0 && future) return -g0_prime * std::pow(-t, -beta) / g;
    return 0.0;
}

double MemoryKernel::caputo_order() const
{
    if (delta) return 1.0;
    const bool integrated =
        support == MemorySupport::integrated_left || support == MemorySupport::integrated_two_sided;
    return integrated ? beta + 1.0 : beta;
}

std::vector<double> memory_convolution(const MemoryKernel& kernel, std::span<const double> du_dt, double dt)
{
    if (du_dt.size() < 2) throw ValidationError("memory convolution needs at least 2 samples");
    if (!(dt > 0.0)) throw ValidationError("dt must be positive", "dt");
    require_finite(du_dt, "memory_convolution");
    if (kernel.delta) return {du_dt.begin(), du_dt.end()};
    if (!(kernel.beta > 0.0 && kernel.beta < 1.0)) {
        throw ValidationError("power-law memory needs beta in (0,1)", "beta");
    }
    if (kernel.support == MemorySupport::integrated_left || kernel.support == MemorySupport::integrated_two_sided) {
        throw ValidationError("integrated kernels act on u'' and are realized by the order beta+1 Caputo scheme",
                              "support");
    }

    auto out = fracops::l1_history_sum(du_dt, kernel.beta, dt);
    for (auto& v : out) v = kernel.g0 * v;

    if (kernel.support == MemorySupport::two_sided && kernel.g0_prime != 0.0) {
        // Future part: slopes mirrored in time, d/dt changes sign under reversal.
        const std::size_t n = du_dt.size();
        std::vector<double> rev(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) rev[i] = -du_dt[n - i];
        const auto right = fracops::l1_history_sum(rev, kernel.beta, dt);
        for (std::size_t j = 0; j < n; ++j) out[j] += kernel.g0_prime * right[n - 1 - j];
    }
    return out;
}

double InteractionKernel::value(double r) const
{
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ValidationError("interaction kernel needs alpha in (1,2)", "alpha");
    }
    const double d = std::abs(r);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    return -g1 / (std::cos(kPi * alpha / 2.0) * std::tgamma(2.0 - alpha)) * std::pow(d, 1.0 - alpha);
}

double lattice_coupling(double alpha, long n)
{
    require_lattice_alpha(alpha);
    if (n == 0) throw ValidationError("lattice coupling is undefined at n = 0");
    return std::pow(static_cast<double>(std::labs(n)), -(alpha + 1.0));
}

double lattice_tail_bound(double alpha, std::size_t cutoff)
{
    require_lattice_alpha(alpha);
    return 2.0 * std::pow(static_cast<double>(cutoff), -alpha) / alpha;
}

std::size_t lattice_cutoff_for(double alpha, double tolerance)
{
    require_lattice_alpha(alpha);
    if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive", "tolerance");
    auto n = static_cast<std::size_t>(std::ceil(std::pow(2.0 / (alpha * tolerance), 1.0 / alpha)));
    n = std::max<std::size_t>(n, 1);
    while (!(lattice_tail_bound(alpha, n) < tolerance)) ++n;
    return n;
}

double riemann_zeta(double s)
{
    if (!(s > 1.0)) throw ValidationError("zeta needs s > 1", "s");
    constexpr int m = 1000;
    double sum = 0.0;
    for (int n = m - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    // sum_{n>=M} n^-s ~ M^(1-s)/(s-1) + M^-s/2 + s M^(-s-1)/12 - s(s+1)(s+2) M^(-s-3)/720
    const double M = m;
    const double tail = std::pow(M, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(M, -s) + s * std::pow(M, -s - 1.0) / 12.0 -
                        s * (s + 1.0) * (s + 2.0) * std::pow(M, -s - 3.0) / 720.0;
    return sum + tail;
}

double lattice_symbol(double alpha, double k, double dx, std::size_t cutoff, double tolerance)
{
    require_lattice_alpha(alpha);
    require_cutoff(alpha, cutoff, tolerance);
    const double p = -(alpha + 1.0);
    const double theta = k * dx;
    double sum = 0.0;
    for (std::size_t n = cutoff; n >= 1; --n) {
        const double x = static_cast<double>(n);
        sum += std::cos(theta * x) * std::pow(x, p);
    }
    return 2.0 * sum;
}

double lattice_symbol_difference(double alpha, double k, double dx, std::size_t cutoff, double tolerance)
{
    require_lattice_alpha(alpha);
    require_cutoff(alpha, cutoff, tolerance);
    const double p = -(alpha + 1.0);
    const double half = 0.5 * k * dx;
    double sum = 0.0;
    for (std::size_t n = cutoff; n >= 1; --n) {
        const double x = static_cast<double>(n);
        const double s = std::sin(half * x);
        sum += s * s * std::pow(x, p);
    }
    return -4.0 * sum;
}

double continuum_coefficient(double alpha)
{
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) {
        throw ValidationError("continuum coefficient needs alpha in (0,1) U (1,2)", "alpha");
    }
    return 2.0 * fracops::gamma_reflected(-alpha) * std::cos(kPi * alpha / 2.0);
}

double renormalized_constant(double alpha, double g0, double dx)
{
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ValidationError("renormalized constant needs alpha in (1,2)", "alpha");
    }
    if (!(dx > 0.0)) throw ValidationError("dx must be positive", "dx");
    return g0 * std::pow(dx, alpha) * continuum_coefficient(alpha);
}

} // namespace fracdyn::kernels
