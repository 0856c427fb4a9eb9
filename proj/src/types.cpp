#include "fracdyn/types.hpp"

#include <cmath>
#include <string>

namespace fracdyn {

namespace {

std::string fmt_value(double v) { return std::to_string(v); }

} // namespace

FractionalOrder::FractionalOrder(double alpha_, double beta_) : alpha(alpha_), beta(beta_)
{
    require_spatial_order(alpha);
    require_caputo_order(beta);
}

void require_spatial_order(double alpha, const char* key)
{
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw ValidationError(std::string(key) + " must lie in (0,2], got " + fmt_value(alpha), key);
    }
}

void require_real_space_riesz_order(double alpha, const char* key)
{
    require_spatial_order(alpha, key);
    if (alpha == 1.0) {
        throw ValidationError(std::string(key) + " = 1 is singular for the real-space Riesz kernel", key);
    }
}

void require_caputo_order(double beta, const char* key)
{
    if (!(beta > 0.0 && beta <= 2.0)) {
        throw ValidationError(std::string(key) + " must lie in (0,2], got " + fmt_value(beta), key);
    }
}

void require_l1_order(double beta, const char* key)
{
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw ValidationError(std::string(key) + " must lie in (0,1] for the L1 scheme, got " + fmt_value(beta), key);
    }
}

GridSpec::GridSpec(std::size_t n_points, double length) : n_(n_points), length_(length), dx_(0.0)
{
    if (n_points == 0) {
        throw ValidationError("grid needs at least one point", "n_points");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("grid length must be positive and finite", "length");
    }
    dx_ = length / static_cast<double>(n_points);
    k_.resize(n_points);
    for (std::size_t m = 0; m < n_points; ++m) {
        k_[m] = 2.0 * kPi * static_cast<double>(signed_mode(m, n_points)) / length;
    }
}

std::vector<double> GridSpec::nodes() const
{
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
}

TimeGrid::TimeGrid(std::size_t n_steps, double dt) : n_steps_(n_steps), dt_(dt)
{
    if (n_steps == 0) {
        throw ValidationError("time grid needs at least one step", "n_steps");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("dt must be positive and finite", "dt");
    }
}

void require_finite(std::span<const double> values, const char* what)
{
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ValidationError(std::string(what) + ": non-finite sample");
        }
    }
}

void require_finite(std::span<const cplx> values, const char* what)
{
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw ValidationError(std::string(what) + ": non-finite sample");
        }
    }
}

} // namespace fracdyn
