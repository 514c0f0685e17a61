#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace ris {

/// Uniform, origin-centred sampling lattice of the RIS plane and its conjugate
/// k-space lattice. Sample i sits at x = (i - nx/2)*dx, so the origin (and the
/// DC bin of the spectrum) is at index (nx/2, ny/2).
class Grid2D {
public:
    Grid2D(std::size_t nx, std::size_t ny, double dx, double dy) : nx_(nx), ny_(ny), dx_(dx), dy_(dy)
    {
        require(nx >= 2 && ny >= 2, "Grid2D: nx and ny must be >= 2");
        require(nx % 2 == 0 && ny % 2 == 0, "Grid2D: nx and ny must be even");
        require(std::isfinite(dx) && std::isfinite(dy) && dx > 0.0 && dy > 0.0,
                "Grid2D: pitch must be positive and finite");
    }

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    std::size_t size() const { return nx_ * ny_; }

    double x(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(nx_ / 2)) * dx_; }
    double y(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(ny_ / 2)) * dy_; }

    double dkx() const { return 2.0 * pi / (static_cast<double>(nx_) * dx_); }
    double dky() const { return 2.0 * pi / (static_cast<double>(ny_) * dy_); }
    double kx(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(nx_ / 2)) * dkx(); }
    double ky(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(ny_ / 2)) * dky(); }

    double nyquist_kx() const { return pi / dx_; }
    double nyquist_ky() const { return pi / dy_; }
    double extent_x() const { return static_cast<double>(nx_) * dx_; }
    double extent_y() const { return static_cast<double>(ny_) * dy_; }
    double cell_area() const { return dx_ * dy_; }

    /// Row-major index over (y, x).
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx_ + i; }

    /// Same pitch, dimensions multiplied by `factor`.
    Grid2D padded(std::size_t factor) const { return {nx_ * factor, ny_ * factor, dx_, dy_}; }
    Grid2D resized(std::size_t nx, std::size_t ny) const { return {nx, ny, dx_, dy_}; }

    bool resolves(double k0) const { return nyquist_kx() >= k0 * (1.0 - 1e-12) && nyquist_ky() >= k0 * (1.0 - 1e-12); }

    friend bool operator==(const Grid2D& a, const Grid2D& b)
    {
        return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.dx_ == b.dx_ && a.dy_ == b.dy_;
    }

private:
    std::size_t nx_, ny_;
    double dx_, dy_;
};

/// Smallest even integer >= n whose only prime factors are 2, 3, 5 and 7.
inline std::size_t fft_friendly_size(std::size_t n)
{
    auto smooth = [](std::size_t m) {
        for (std::size_t p : {2u, 3u, 5u, 7u})
            while (m % p == 0) m /= p;
        return m == 1;
    };
    std::size_t m = n < 2 ? 2 : n + (n % 2);
    while (!smooth(m)) m += 2;
    return m;
}

struct FieldTag {
    static constexpr const char* kind = "field";
};
struct SpectrumTag {
    static constexpr const char* kind = "spectrum";
};

/// Complex samples on a Grid2D. The tag keeps real-space fields and k-space
/// spectra from being mixed up; both share the layout (row-major over (y, x)).
template <class Tag>
class Sampled2D {
public:
    explicit Sampled2D(Grid2D grid) : grid_(grid), values_(grid.size(), cplx{}) {}

    Sampled2D(Grid2D grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values))
    {
        require(values_.size() == grid_.size(), std::string(Tag::kind) + ": value count does not match grid");
        for (const auto& v : values_)
            require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                    std::string(Tag::kind) + ": non-finite sample");
    }

    template <class F>
    static Sampled2D generate(Grid2D grid, F&& fn)
    {
        Sampled2D out(grid);
        for (std::size_t j = 0; j < grid.ny(); ++j)
            for (std::size_t i = 0; i < grid.nx(); ++i) out(i, j) = fn(i, j);
        return out;
    }

    const Grid2D& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }
    cplx& operator[](std::size_t n) { return values_[n]; }
    const cplx& operator[](std::size_t n) const { return values_[n]; }

    std::span<cplx> values() { return values_; }
    std::span<const cplx> values() const { return values_; }

    bool all_finite() const
    {
        for (const auto& v : values_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    /// Sum of |v|^2 (no measure applied).
    double norm_sq() const
    {
        double s = 0.0;
        for (const auto& v : values_) s += std::norm(v);
        return s;
    }

private:
    Grid2D grid_;
    std::vector<cplx> values_;
};

using ComplexField2D = Sampled2D<FieldTag>;
using Spectrum2D = Sampled2D<SpectrumTag>;

/// ∬|E|^2 dx dy as a Riemann sum.
inline double field_energy(const ComplexField2D& f) { return f.norm_sq() * f.grid().cell_area(); }

/// ∬|Ẽ|^2 dkx dky as a Riemann sum.
inline double spectrum_energy(const Spectrum2D& s) { return s.norm_sq() * s.grid().dkx() * s.grid().dky(); }

/// Embeds `field` at the centre of a larger grid with the same pitch. The
/// origin sample stays at the origin.
inline ComplexField2D embed_centered(const ComplexField2D& field, const Grid2D& target)
{
    const Grid2D& g = field.grid();
    require(target.dx() == g.dx() && target.dy() == g.dy(), "embed_centered: pitch mismatch");
    require(target.nx() >= g.nx() && target.ny() >= g.ny(), "embed_centered: target smaller than source");
    ComplexField2D out(target);
    const std::size_t ox = target.nx() / 2 - g.nx() / 2;
    const std::size_t oy = target.ny() / 2 - g.ny() / 2;
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) out(i + ox, j + oy) = field(i, j);
    return out;
}

/// Inverse of embed_centered: extracts the central window of size `target`.
inline ComplexField2D crop_centered(const ComplexField2D& field, const Grid2D& target)
{
    const Grid2D& g = field.grid();
    require(target.dx() == g.dx() && target.dy() == g.dy(), "crop_centered: pitch mismatch");
    require(target.nx() <= g.nx() && target.ny() <= g.ny(), "crop_centered: target larger than source");
    ComplexField2D out(target);
    const std::size_t ox = g.nx() / 2 - target.nx() / 2;
    const std::size_t oy = g.ny() / 2 - target.ny() / 2;
    for (std::size_t j = 0; j < target.ny(); ++j)
        for (std::size_t i = 0; i < target.nx(); ++i) out(i, j) = field(i + ox, j + oy);
    return out;
}

}  // namespace ris
