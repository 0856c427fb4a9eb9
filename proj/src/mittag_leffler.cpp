#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fracdyn/fracops.hpp"

namespace fracdyn::fracops {

namespace {

using mpfloat = boost::multiprecision::cpp_bin_float_100;

constexpr double kCancellationLimit = 1e3;
constexpr double kMultiprecisionReach = 150.0; // largest |z|^(1/beta) summed in 100 digits
constexpr int kMaxTerms = 20000;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

std::optional<cplx> series_double(double beta, cplx z)
{
    cplx sum = 0.0;
    double abs_sum = 0.0;
    cplx zk = 1.0;
    int small_run = 0;
    for (int k = 0; k < 2000; ++k) {
        const double arg = beta * k + 1.0;
        double rg = 0.0;
        if (arg < 170.0) {
            rg = 1.0 / std::tgamma(arg);
        } else {
            rg = std::exp(-std::lgamma(arg));
        }
        const cplx term = zk * rg;
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) return std::nullopt;
        sum += term;
        abs_sum += std::abs(term);
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small_run >= 3) {
                if (abs_sum > kCancellationLimit * std::abs(sum)) return std::nullopt;
                return sum;
            }
        } else {
            small_run = 0;
        }
        zk *= z;
        if (zk == 0.0) return sum;
    }
    return std::nullopt;
}

cplx series_multiprecision(double beta, cplx z)
{
    const mpfloat b(beta);
    const mpfloat zr(z.real()), zi(z.imag());
    mpfloat sr = 0, si = 0;
    mpfloat pr = 1, pi = 0; // z^k
    mpfloat prev_mag = std::numeric_limits<double>::infinity();
    const mpfloat tiny("1e-40");
    for (int k = 0; k < kMaxTerms; ++k) {
        const mpfloat g = boost::math::tgamma(b * k + 1);
        const mpfloat tr = pr / g, ti = pi / g;
        sr += tr;
        si += ti;
        const mpfloat mag = abs(tr) + abs(ti);
        const mpfloat smag = abs(sr) + abs(si);
        if (k > 0 && mag < prev_mag && mag <= tiny * smag) {
            return {sr.convert_to<double>(), si.convert_to<double>()};
        }
        prev_mag = mag;
        const mpfloat nr = pr * zr - pi * zi;
        const mpfloat ni = pr * zi + pi * zr;
        pr = nr;
        pi = ni;
    }
    throw NumericalError("Mittag-Leffler series did not converge within the term budget");
}

cplx asymptotic(double beta, cplx z)
{
    const double r = std::abs(z);
    const double th = std::arg(z);
    const double rho = std::pow(r, 1.0 / beta);

    cplx expo = 0.0;
    for (int m = -2; m <= 2; ++m) {
        const double phi = th + 2.0 * kPi * m;
        if (std::abs(phi) < beta * kPi) {
            expo += std::exp(rho * cplx(std::cos(phi / beta), std::sin(phi / beta)));
        }
    }
    expo /= beta;

    cplx tail = 0.0;
    const cplx zinv = 1.0 / z;
    cplx p = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 400; ++k) {
        p *= zinv;
        const double rg = reciprocal_gamma(1.0 - beta * k);
        if (rg == 0.0) continue;
        const cplx term = p * rg;
        const double mag = std::abs(term);
        if (mag > prev) break; // optimal truncation of the divergent series
        tail += term;
        prev = mag;
        if (mag <= 1e-17 * std::abs(tail)) break;
    }
    return expo - tail;
}

} // namespace

double reciprocal_gamma(double x)
{
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 0.0) {
        return x < 170.0 ? 1.0 / std::tgamma(x) : std::exp(-std::lgamma(x));
    }
    // 1/G(x) = sin(pi x) G(1-x) / pi
    const double s = std::sin(kPi * x);
    const double g = 1.0 - x;
    if (g < 170.0) return s * std::tgamma(g) / kPi;
    return s * std::exp(std::lgamma(g)) / kPi;
}

double gamma_reflected(double x)
{
    if (is_nonpositive_integer(x)) {
        throw ValidationError("Gamma has a pole at a non-positive integer");
    }
    if (x > 0.0) return std::tgamma(x);
    return kPi / (std::sin(kPi * x) * std::tgamma(1.0 - x));
}

cplx mittag_leffler(double beta, cplx z)
{
    if (!(beta > 0.0 && beta <= 2.0)) {
        throw ValidationError("Mittag-Leffler order must lie in (0,2]", "beta");
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ValidationError("Mittag-Leffler argument must be finite");
    }
    if (z == 0.0) return 1.0;
    if (auto s = series_double(beta, z)) return *s;
    const double rho = std::pow(std::abs(z), 1.0 / beta);
    if (rho <= kMultiprecisionReach) return series_multiprecision(beta, z);
    return asymptotic(beta, z);
}

double mittag_leffler(double beta, double z)
{
    return mittag_leffler(beta, cplx(z, 0.0)).real();
}

} // namespace fracdyn::fracops
