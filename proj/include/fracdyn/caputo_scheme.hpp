// Product-integration discretizations of the left Caputo derivative on a
// uniform grid, shared by the operator module and the time steppers.
//
// Order beta in (0,1]: the L1 scheme. u is piecewise linear between nodes and
// the derivative is collocated at t_n:
//
//   D^b u(t_n) ~ dt^-b / G(2-b) * sum_{j=1..n} w_{n-j} (u^j - u^{j-1}),
//   w_i = (i+1)^(1-b) - i^(1-b).
//
// Order beta in (1,2]: delta = beta - 1 and v = u'. Velocities live on half
// levels, v_{k+1/2} = (u^{k+1} - u^k)/dt, with v_0 the prescribed initial
// velocity; v is interpolated linearly through them and the L1 integral of
// order delta is taken exactly. Collocation is at t_m for the step that
// produces u^{m+1} (t_{1/2} for the very first step). Weights:
//
//   first half-segment [0, dt/2]:  a0(m) = m^(1-d) - (m-1/2)^(1-d)   (times 2)
//   segment centred on t_{m-j}:    c_j = (j+1/2)^(1-d) - (j-1/2)^(1-d), j >= 1
//   truncated segment at t_m:      c_0 = (1/2)^(1-d)
//
// At beta = 2 every weight but c_0 vanishes and the scheme is the centred
// second difference (u^{m+1} - 2u^m + u^{m-1}) / dt^2. At beta = 1 only
// w_0 survives and the scheme is the backward difference.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fracdyn/types.hpp"

namespace fracdyn {

class CaputoScheme {
public:
    // `max_level` is the largest level index n that will be requested.
    CaputoScheme(double beta, double dt, std::size_t max_level);

    double beta() const noexcept { return beta_; }
    double dt() const noexcept { return dt_; }
    bool first_order() const noexcept { return beta_ <= 1.0; }

    // Collocation time (in units of dt) of the discrete equation producing u^n, n >= 1.
    double collocation_level(std::size_t n) const noexcept;

    // Coefficient of u^n in the discrete derivative collocated for level n.
    double new_level_coefficient(std::size_t n) const noexcept;

    // Time-averaging weights of the implicit linear terms for level n:
    // the linear operator is applied to  sum_i theta_i u^{n-i}, i = 0,1,2.
    // Second order in the collocation point in every case.
    struct LinearWeights {
        double newest = 1.0;
        double previous = 0.0;
        double before_previous = 0.0;
    };
    LinearWeights linear_weights(std::size_t n) const noexcept;

    // Level whose state feeds the explicit (nonlinear) terms of step n.
    std::size_t explicit_level(std::size_t n) const noexcept { return n - 1; }

    // Everything in the discrete derivative for level n except new_level_coefficient(n) * u^n.
    // `rows[j]` is u^j for j < n; `initial_velocity` is ignored for beta <= 1.
    template <class T>
    void history_part(std::size_t n, std::span<const std::vector<T>> rows,
                      std::span<const T> initial_velocity, std::span<T> out) const;

    // The whole discrete derivative for level n in difference form (rows[j], j <= n),
    // so that constant data give exactly zero.
    template <class T>
    void derivative(std::size_t n, std::span<const std::vector<T>> rows, std::span<const T> initial_velocity,
                    std::span<T> out) const;

    const std::vector<double>& l1_weights() const noexcept { return w_; }

private:
    double beta_;
    double dt_;
    double scale_;           // dt^-b / G(2-b)  or  dt^-d / G(2-d)
    std::vector<double> w_;  // L1 weights (first order) or c_j (second order)
    std::vector<double> a0_; // second order: first-half-segment weights by collocation level m
};

template <class T>
void CaputoScheme::history_part(std::size_t n, std::span<const std::vector<T>> rows,
                                std::span<const T> initial_velocity, std::span<T> out) const
{
    const std::size_t width = out.size();
    for (auto& v : out) v = T{};
    if (first_order()) {
        // sum_{j=1}^{n-1} w_{n-j} (u^j - u^{j-1})  -  w_0 u^{n-1}
        for (std::size_t j = 1; j < n; ++j) {
            const double w = w_[n - j];
            if (w == 0.0) continue;
            const auto& a = rows[j];
            const auto& b = rows[j - 1];
            for (std::size_t i = 0; i < width; ++i) out[i] += w * (a[i] - b[i]);
        }
        const auto& last = rows[n - 1];
        for (std::size_t i = 0; i < width; ++i) out[i] = scale_ * (out[i] - w_[0] * last[i]);
        return;
    }

    const double inv_dt = 1.0 / dt_;
    if (n == 1) {
        // 2 c_0 (v_{1/2} - psi), v_{1/2} = (u^1 - u^0)/dt
        const double c = 2.0 * w_[0];
        for (std::size_t i = 0; i < width; ++i) {
            out[i] = scale_ * c * (-rows[0][i] * inv_dt - initial_velocity[i]);
        }
        return;
    }
    const std::size_t m = n - 1;
    // first half segment
    {
        const double c = 2.0 * a0_[m];
        if (c != 0.0) {
            for (std::size_t i = 0; i < width; ++i) {
                out[i] += c * ((rows[1][i] - rows[0][i]) * inv_dt - initial_velocity[i]);
            }
        }
    }
    // full segments centred on t_k, k = 1..m-1: (v_{k+1/2} - v_{k-1/2})
    for (std::size_t k = 1; k < m; ++k) {
        const double c = w_[m - k];
        if (c == 0.0) continue;
        const auto& up = rows[k + 1];
        const auto& mid = rows[k];
        const auto& lo = rows[k - 1];
        for (std::size_t i = 0; i < width; ++i) out[i] += c * (up[i] - 2.0 * mid[i] + lo[i]) * inv_dt;
    }
    // truncated segment at t_m: c_0 (v_{m+1/2} - v_{m-1/2}), newest level excluded
    const auto& um = rows[m];
    const auto& ul = rows[m - 1];
    for (std::size_t i = 0; i < width; ++i) {
        out[i] = scale_ * (out[i] + w_[0] * (-um[i] * inv_dt - (um[i] - ul[i]) * inv_dt));
    }
}

template <class T>
void CaputoScheme::derivative(std::size_t n, std::span<const std::vector<T>> rows,
                              std::span<const T> initial_velocity, std::span<T> out) const
{
    const std::size_t width = out.size();
    for (auto& v : out) v = T{};
    if (first_order()) {
        for (std::size_t j = 1; j <= n; ++j) {
            const double w = w_[n - j];
            const auto& a = rows[j];
            const auto& b = rows[j - 1];
            for (std::size_t i = 0; i < width; ++i) out[i] += w * (a[i] - b[i]);
        }
        for (auto& v : out) v *= scale_;
        return;
    }

    const double inv_dt = 1.0 / dt_;
    if (n == 1) {
        const double c = 2.0 * w_[0];
        for (std::size_t i = 0; i < width; ++i) {
            out[i] = scale_ * c * ((rows[1][i] - rows[0][i]) * inv_dt - initial_velocity[i]);
        }
        return;
    }
    const std::size_t m = n - 1;
    const double c = 2.0 * a0_[m];
    for (std::size_t i = 0; i < width; ++i) {
        out[i] = c * ((rows[1][i] - rows[0][i]) * inv_dt - initial_velocity[i]);
    }
    for (std::size_t k = 1; k <= m; ++k) {
        const double w = k == m ? w_[0] : w_[m - k];
        const auto& up = rows[k + 1];
        const auto& mid = rows[k];
        const auto& lo = rows[k - 1];
        for (std::size_t i = 0; i < width; ++i) out[i] += w * (up[i] - 2.0 * mid[i] + lo[i]) * inv_dt;
    }
    for (auto& v : out) v *= scale_;
}

} // namespace fracdyn
