// Thin RAII layer over FFTW complex-to-complex transforms.
//
// Plans are created once per size under a global mutex (the FFTW planner is
// not re-entrant) and executed through the new-array interface, which is
// thread-safe. Plans use FFTW_ESTIMATE | FFTW_UNALIGNED so results do not
// depend on timing measurements or on buffer alignment.
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracdyn/types.hpp"

namespace fracdyn {

class FourierTransform {
public:
    // Shared plan pair for an n-point transform.
    static std::shared_ptr<const FourierTransform> of_size(std::size_t n);

    explicit FourierTransform(std::size_t n);
    ~FourierTransform();
    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;

    std::size_t size() const noexcept { return n_; }

    // out_m = sum_j in_j exp(-2 pi i j m / n). `in` and `out` must not alias.
    void forward(std::span<const cplx> in, std::span<cplx> out) const;
    // out_j = (1/n) sum_m in_m exp(+2 pi i j m / n). `in` and `out` must not alias.
    void backward(std::span<const cplx> in, std::span<cplx> out) const;

    std::vector<cplx> forward(std::span<const cplx> in) const;
    std::vector<cplx> forward(std::span<const double> in) const;
    std::vector<cplx> backward(std::span<const cplx> in) const;

private:
    std::size_t n_;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
};

// Applies the real diagonal Fourier multiplier `symbol` (FFT order) to u.
std::vector<cplx> apply_symbol(std::span<const cplx> u, std::span<const double> symbol);
std::vector<double> apply_symbol(std::span<const double> u, std::span<const double> symbol);

} // namespace fracdyn
