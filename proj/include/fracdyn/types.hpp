// Common value types, grids and error classes shared by every module.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracdyn {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Invalid input: an order outside its admissible range, a malformed grid,
// an unknown config key. `key()` names the offending parameter when known.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what, std::string key = {})
        : std::invalid_argument(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Blow-up, quadrature or Newton non-convergence, singular linear systems.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Temporal and spatial fractional orders.
//   alpha in (0,2]; alpha == 1 is rejected only where the real-space Riesz
//   kernel is used (cos(pi*alpha/2) vanishes there).
//   beta in (0,2]; 1 and 2 are the classical limits.
struct FractionalOrder {
    double alpha = 2.0;
    double beta = 1.0;

    FractionalOrder() = default;
    FractionalOrder(double alpha_, double beta_);

    bool operator==(const FractionalOrder&) const = default;
};

void require_spatial_order(double alpha, const char* key = "alpha");
void require_real_space_riesz_order(double alpha, const char* key = "alpha");
// beta in (0,1) U (1,2), plus the classical values 1 and 2.
void require_caputo_order(double beta, const char* key = "beta");
// beta in (0,1) for the first-order L1 scheme; 1 allowed as the classical limit.
void require_l1_order(double beta, const char* key = "beta");

// Uniform periodic grid on [0, L) with the FFT-ordered wavenumber set
// k_m = 2*pi*m/L, m = 0..N/2-1, -N/2..-1.
class GridSpec {
public:
    GridSpec(std::size_t n_points, double length);

    std::size_t n_points() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double dx() const noexcept { return dx_; }
    double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }
    std::vector<double> nodes() const;
    const std::vector<double>& wavenumbers() const noexcept { return k_; }

    bool operator==(const GridSpec& o) const { return n_ == o.n_ && length_ == o.length_; }

private:
    std::size_t n_;
    double length_;
    double dx_;
    std::vector<double> k_;
};

// Uniform time grid t_j = j*dt, j = 0..n_steps.
class TimeGrid {
public:
    TimeGrid(std::size_t n_steps, double dt);

    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t n_nodes() const noexcept { return n_steps_ + 1; }
    double dt() const noexcept { return dt_; }
    double t(std::size_t j) const noexcept { return static_cast<double>(j) * dt_; }
    double final_time() const noexcept { return t(n_steps_); }

    bool operator==(const TimeGrid&) const = default;

private:
    std::size_t n_steps_;
    double dt_;
};

// Throws ValidationError if any sample is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);
void require_finite(std::span<const cplx> values, const char* what);

// FFT-ordered integer mode index for DFT bin m of an n-point transform.
inline long signed_mode(std::size_t m, std::size_t n) noexcept
{
    return m < (n + 1) / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

} // namespace fracdyn
