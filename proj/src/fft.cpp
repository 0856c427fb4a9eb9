#include "fracdyn/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace fracdyn {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

} // namespace

std::shared_ptr<const FourierTransform> FourierTransform::of_size(std::size_t n)
{
    static std::mutex cache_mutex;
    static std::map<std::size_t, std::shared_ptr<const FourierTransform>> cache;
    std::lock_guard lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_shared<const FourierTransform>(n);
    }
    return slot;
}

FourierTransform::FourierTransform(std::size_t n) : n_(n)
{
    if (n == 0) {
        throw ValidationError("FourierTransform: size must be positive", "n_points");
    }
    std::vector<cplx> a(n), b(n);
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
    std::lock_guard lock(planner_mutex());
    forward_plan_ = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    backward_plan_ = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    if (!forward_plan_ || !backward_plan_) {
        throw NumericalError("FourierTransform: FFTW planning failed");
    }
}

FourierTransform::~FourierTransform()
{
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void FourierTransform::forward(std::span<const cplx> in, std::span<cplx> out) const
{
    if (in.size() != n_ || out.size() != n_) {
        throw ValidationError("FourierTransform::forward: size mismatch");
    }
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void FourierTransform::backward(std::span<const cplx> in, std::span<cplx> out) const
{
    if (in.size() != n_ || out.size() != n_) {
        throw ValidationError("FourierTransform::backward: size mismatch");
    }
    fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(in.data()), as_fftw(out.data()));
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : out) v *= scale;
}

std::vector<cplx> FourierTransform::forward(std::span<const cplx> in) const
{
    std::vector<cplx> out(n_);
    forward(in, out);
    return out;
}

std::vector<cplx> FourierTransform::forward(std::span<const double> in) const
{
    std::vector<cplx> tmp(in.begin(), in.end());
    return forward(std::span<const cplx>(tmp));
}

std::vector<cplx> FourierTransform::backward(std::span<const cplx> in) const
{
    std::vector<cplx> out(n_);
    backward(in, out);
    return out;
}

std::vector<cplx> apply_symbol(std::span<const cplx> u, std::span<const double> symbol)
{
    if (u.size() != symbol.size()) {
        throw ValidationError("apply_symbol: size mismatch");
    }
    const auto fft = FourierTransform::of_size(u.size());
    auto hat = fft->forward(u);
    for (std::size_t m = 0; m < hat.size(); ++m) hat[m] *= symbol[m];
    return fft->backward(hat);
}

std::vector<double> apply_symbol(std::span<const double> u, std::span<const double> symbol)
{
    std::vector<cplx> z(u.begin(), u.end());
    const auto out = apply_symbol(std::span<const cplx>(z), symbol);
    std::vector<double> r(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) r[i] = out[i].real();
    return r;
}

} // namespace fracdyn
