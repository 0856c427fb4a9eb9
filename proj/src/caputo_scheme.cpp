#include "fracdyn/caputo_scheme.hpp"

namespace fracdyn {

CaputoScheme::CaputoScheme(double beta, double dt, std::size_t max_level) : beta_(beta), dt_(dt), scale_(0.0)
{
    require_caputo_order(beta);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("dt must be positive and finite", "dt");
    }
    const std::size_t len = max_level + 2;
    if (first_order()) {
        const double p = 1.0 - beta;
        scale_ = std::pow(dt, -beta) / std::tgamma(2.0 - beta);
        w_.resize(len);
        for (std::size_t i = 0; i < len; ++i) {
            const double x = static_cast<double>(i);
            w_[i] = std::pow(x + 1.0, p) - (i == 0 ? 0.0 : std::pow(x, p));
        }
    } else {
        const double d = beta - 1.0;
        const double p = 1.0 - d;
        scale_ = std::pow(dt, -d) / std::tgamma(2.0 - d);
        w_.resize(len);
        a0_.resize(len);
        w_[0] = std::pow(0.5, p);
        for (std::size_t j = 1; j < len; ++j) {
            const double x = static_cast<double>(j);
            w_[j] = std::pow(x + 0.5, p) - std::pow(x - 0.5, p);
        }
        a0_[0] = 0.0;
        for (std::size_t m = 1; m < len; ++m) {
            const double x = static_cast<double>(m);
            a0_[m] = std::pow(x, p) - std::pow(x - 0.5, p);
        }
    }
}

double CaputoScheme::collocation_level(std::size_t n) const noexcept
{
    if (first_order()) return static_cast<double>(n);
    return n == 1 ? 0.5 : static_cast<double>(n - 1);
}

double CaputoScheme::new_level_coefficient(std::size_t n) const noexcept
{
    if (first_order()) return scale_ * w_[0];
    const double c = (n == 1 ? 2.0 : 1.0) * w_[0];
    return scale_ * c / dt_;
}

CaputoScheme::LinearWeights CaputoScheme::linear_weights(std::size_t n) const noexcept
{
    if (first_order()) return {1.0, 0.0, 0.0};
    if (n == 1) return {0.5, 0.5, 0.0};
    return {0.25, 0.5, 0.25};
}

} // namespace fracdyn
