#pragma once

// Centred discrete Fourier transforms with the library-wide convention
//
//   Ẽ(k) = (1/2π)^2 ∬ E(x) e^{-j k·x} dx dy        (forward)
//   E(x) = ∬ Ẽ(k) e^{+j k·x} dkx dky              (inverse)
//
// discretised as a DFT scaled by dx·dy/(2π)^2 (forward) and dkx·dky (inverse),
// with the DC bin at index (nx/2, ny/2). Parseval then reads
// Σ|E|^2 dx dy = (2π)^2 Σ|Ẽ|^2 dkx dky.

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "grid.hpp"

namespace ris {

namespace detail {

struct PlanDeleter {
    void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

class AlignedBuffer {
public:
    explicit AlignedBuffer(std::size_t n) : n_(n), data_(fftw_alloc_complex(n))
    {
        if (!data_) throw NumericalError("fft: allocation failed");
    }
    ~AlignedBuffer() { fftw_free(data_); }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;

    fftw_complex* get() { return data_; }
    cplx* as_complex() { return reinterpret_cast<cplx*>(data_); }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    fftw_complex* data_;
};

// The FFTW planner is not thread-safe; execution with new-array execute is.
inline std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

// FFTW_ESTIMATE keeps plan selection (and therefore the output bits)
// reproducible from run to run.
inline fftw_plan cached_plan(int n0, int n1, int sign)
{
    static std::map<std::tuple<int, int, int>, PlanHandle> cache;
    std::lock_guard lock(planner_mutex());
    auto key = std::make_tuple(n0, n1, sign);
    if (auto it = cache.find(key); it != cache.end()) return it->second.get();
    AlignedBuffer scratch(static_cast<std::size_t>(n0) * static_cast<std::size_t>(std::max(n1, 1)));
    fftw_plan p = n1 > 0 ? fftw_plan_dft_2d(n0, n1, scratch.get(), scratch.get(), sign, FFTW_ESTIMATE)
                         : fftw_plan_dft_1d(n0, scratch.get(), scratch.get(), sign, FFTW_ESTIMATE);
    if (!p) throw NumericalError("fft: FFTW planning failed");
    cache.emplace(key, PlanHandle(p));
    return p;
}

}  // namespace detail

/// In-place centred 2-D DFT (no scaling) over row-major (y, x) data.
/// sign = FFTW_FORWARD (-1) or FFTW_BACKWARD (+1).
inline void dft2_centered(std::span<cplx> data, std::size_t nx, std::size_t ny, int sign)
{
    require(data.size() == nx * ny, "dft2_centered: size mismatch");
    detail::AlignedBuffer buf(nx * ny);
    cplx* b = buf.as_complex();
    const std::size_t hx = nx / 2, hy = ny / 2;
    for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t js = (j + hy) % ny;
        for (std::size_t i = 0; i < nx; ++i) b[js * nx + (i + hx) % nx] = data[j * nx + i];
    }
    fftw_execute_dft(detail::cached_plan(static_cast<int>(ny), static_cast<int>(nx), sign), buf.get(), buf.get());
    for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t js = (j + hy) % ny;
        for (std::size_t i = 0; i < nx; ++i) data[j * nx + i] = b[js * nx + (i + hx) % nx];
    }
}

/// In-place centred 1-D DFT (no scaling).
inline void dft1_centered(std::span<cplx> data, int sign)
{
    const std::size_t n = data.size();
    require(n >= 2 && n % 2 == 0, "dft1_centered: length must be even");
    detail::AlignedBuffer buf(n);
    cplx* b = buf.as_complex();
    const std::size_t h = n / 2;
    for (std::size_t i = 0; i < n; ++i) b[(i + h) % n] = data[i];
    fftw_execute_dft(detail::cached_plan(static_cast<int>(n), 0, sign), buf.get(), buf.get());
    for (std::size_t i = 0; i < n; ++i) data[i] = b[(i + h) % n];
}

inline Spectrum2D forward_spectrum(const ComplexField2D& field)
{
    if (!field.all_finite()) throw ValidationError("forward_spectrum: field contains non-finite samples");
    const Grid2D& g = field.grid();
    std::vector<cplx> v(field.values().begin(), field.values().end());
    dft2_centered(v, g.nx(), g.ny(), FFTW_FORWARD);
    const double scale = g.cell_area() / (4.0 * pi * pi);
    for (auto& c : v) c *= scale;
    return Spectrum2D(g, std::move(v));
}

inline ComplexField2D inverse_spectrum(const Spectrum2D& spec)
{
    if (!spec.all_finite()) throw ValidationError("inverse_spectrum: spectrum contains non-finite samples");
    const Grid2D& g = spec.grid();
    std::vector<cplx> v(spec.values().begin(), spec.values().end());
    dft2_centered(v, g.nx(), g.ny(), FFTW_BACKWARD);
    const double scale = g.dkx() * g.dky();
    for (auto& c : v) c *= scale;
    return ComplexField2D(g, std::move(v));
}

/// Inverse transform onto a grid the caller expects; rejects a mismatch.
inline ComplexField2D inverse_spectrum(const Spectrum2D& spec, const Grid2D& expected)
{
    if (!(spec.grid() == expected)) throw ValidationError("inverse_spectrum: spectrum grid does not match target grid");
    return inverse_spectrum(spec);
}

}  // namespace ris
