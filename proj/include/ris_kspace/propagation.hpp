#pragma once

// Angular-spectrum propagation: each plane-wave component of the padded
// field spectrum picks up e^{j kz dz}, kz = sqrt(k0^2 - kx^2 - ky^2).

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "fft.hpp"
#include "parallel.hpp"

namespace ris {

enum class EvanescentPolicy { decay, truncate };

struct PropagationPlan {
    Grid2D grid;
    std::size_t pad_factor = 2;
    double k0 = 0.0;
    EvanescentPolicy policy = EvanescentPolicy::decay;
    bool check_walkoff = true;

    PropagationPlan(Grid2D g, double k, std::size_t pad = 2, EvanescentPolicy p = EvanescentPolicy::decay)
        : grid(g), pad_factor(pad), k0(k), policy(p)
    {
        validate();
    }

    void validate() const
    {
        require(pad_factor >= 1, "PropagationPlan: pad_factor must be >= 1");
        require(k0 > 0.0 && std::isfinite(k0), "PropagationPlan: k0 must be positive");
        if (!grid.resolves(k0)) {
            std::ostringstream os;
            os << "PropagationPlan: pitch (" << grid.dx() << ", " << grid.dy() << ") m does not resolve k0=" << k0
               << " rad/m (need pitch <= lambda/2); use a finer grid";
            throw ValidationError(os.str());
        }
    }

    /// Padded lattice actually transformed (FFT-friendly sizes).
    Grid2D padded_grid() const
    {
        return grid.resized(fft_friendly_size(grid.nx() * pad_factor), fft_friendly_size(grid.ny() * pad_factor));
    }

    /// e^{j kz dz} or its evanescent counterpart for one k-space point.
    cplx transfer(double kx, double ky, double dz) const
    {
        const double kt2 = kx * kx + ky * ky;
        const double k2 = k0 * k0;
        if (kt2 <= k2) return std::polar(1.0, std::sqrt(k2 - kt2) * dz);
        if (policy == EvanescentPolicy::truncate) return 0.0;
        return std::exp(-std::sqrt(kt2 - k2) * dz);
    }
};

namespace detail {

// Value at which the running sum of `w` first reaches `frac` of its total.
inline double weighted_quantile(const std::vector<double>& axis, const std::vector<double>& w, double frac)
{
    double total = 0.0;
    for (double v : w) total += v;
    if (!(total > 0.0)) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        if (acc >= frac * total) return axis[i];
    }
    return axis.back();
}

}  // namespace detail

/// Where the beam can be at distance z: the 99% energy footprint of the
/// source moved by the central 90% of its propagating ray angles.
struct WalkoffEstimate {
    double x_lo, x_hi, y_lo, y_hi;     // source footprint, m
    double tx_lo, tx_hi, ty_lo, ty_hi;  // ray slopes kx/kz, ky/kz

    double reach_x_lo(double z) const { return std::min(x_lo, x_lo + z * tx_lo); }
    double reach_x_hi(double z) const { return std::max(x_hi, x_hi + z * tx_hi); }
    double reach_y_lo(double z) const { return std::min(y_lo, y_lo + z * ty_lo); }
    double reach_y_hi(double z) const { return std::max(y_hi, y_hi + z * ty_hi); }
};

inline WalkoffEstimate estimate_walkoff(const ComplexField2D& field, const Spectrum2D& spec, double k0)
{
    const Grid2D& g = field.grid();
    std::vector<double> xs(g.nx()), ys(g.ny()), px(g.nx(), 0.0), py(g.ny(), 0.0);
    for (std::size_t i = 0; i < g.nx(); ++i) xs[i] = g.x(i);
    for (std::size_t j = 0; j < g.ny(); ++j) ys[j] = g.y(j);
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double e = std::norm(field(i, j));
            px[i] += e;
            py[j] += e;
        }
    WalkoffEstimate w{};
    w.x_lo = detail::weighted_quantile(xs, px, 0.005);
    w.x_hi = detail::weighted_quantile(xs, px, 0.995);
    w.y_lo = detail::weighted_quantile(ys, py, 0.005);
    w.y_hi = detail::weighted_quantile(ys, py, 0.995);

    const Grid2D& s = spec.grid();
    std::vector<double> kxs(s.nx()), kys(s.ny()), qx(s.nx(), 0.0), qy(s.ny(), 0.0);
    for (std::size_t i = 0; i < s.nx(); ++i) kxs[i] = s.kx(i);
    for (std::size_t j = 0; j < s.ny(); ++j) kys[j] = s.ky(j);
    for (std::size_t j = 0; j < s.ny(); ++j)
        for (std::size_t i = 0; i < s.nx(); ++i) {
            if (s.kx(i) * s.kx(i) + s.ky(j) * s.ky(j) > k0 * k0) continue;
            const double e = std::norm(spec(i, j));
            qx[i] += e;
            qy[j] += e;
        }
    auto slope = [&](double k) {
        const double c = std::clamp(k / k0, -0.999, 0.999);
        return c / std::sqrt(1.0 - c * c);
    };
    w.tx_lo = slope(detail::weighted_quantile(kxs, qx, 0.05));
    w.tx_hi = slope(detail::weighted_quantile(kxs, qx, 0.95));
    w.ty_lo = slope(detail::weighted_quantile(kys, qy, 0.05));
    w.ty_hi = slope(detail::weighted_quantile(kys, qy, 0.95));
    return w;
}

/// Throws if the beam predicted by `w` leaves the padded lattice at distance z.
inline void check_walkoff(const WalkoffEstimate& w, const Grid2D& padded, double z)
{
    const double x0 = padded.x(0), x1 = padded.x(padded.nx() - 1);
    const double y0 = padded.y(0), y1 = padded.y(padded.ny() - 1);
    if (w.reach_x_lo(z) < x0 || w.reach_x_hi(z) > x1 || w.reach_y_lo(z) < y0 || w.reach_y_hi(z) > y1) {
        std::ostringstream os;
        os << "propagate: at z=" << z << " m the beam is predicted to span [" << w.reach_x_lo(z) << ", "
           << w.reach_x_hi(z) << "] x [" << w.reach_y_lo(z) << ", " << w.reach_y_hi(z)
           << "] m, outside the padded window [" << x0 << ", " << x1 << "] x [" << y0 << ", " << y1
           << "] m; increase pad_factor or use the far-field module for this distance";
        throw ValidationError(os.str());
    }
}

/// Padded spectrum of a field, ready for propagation to many planes.
class PropagationSource {
public:
    PropagationSource(const ComplexField2D& field, const PropagationPlan& plan) : plan_(plan), spectrum_(plan.padded_grid())
    {
        plan_.validate();
        if (!(field.grid() == plan_.grid)) throw ValidationError("propagate: field grid differs from the plan grid");
        spectrum_ = forward_spectrum(embed_centered(field, plan_.padded_grid()));
        if (plan_.check_walkoff) walkoff_ = estimate_walkoff(field, spectrum_, plan_.k0);
    }

    const PropagationPlan& plan() const { return plan_; }
    const Spectrum2D& spectrum() const { return spectrum_; }
    const Grid2D& padded_grid() const { return spectrum_.grid(); }

    void check(double dz) const
    {
        require(std::isfinite(dz) && dz >= 0.0, "propagate: dz must be finite and >= 0");
        if (plan_.check_walkoff) check_walkoff(walkoff_, padded_grid(), dz);
    }

    /// Full padded field at distance dz.
    ComplexField2D padded_field(double dz) const
    {
        check(dz);
        const Grid2D& g = padded_grid();
        Spectrum2D s(g);
        for (std::size_t j = 0; j < g.ny(); ++j)
            for (std::size_t i = 0; i < g.nx(); ++i) s(i, j) = spectrum_(i, j) * plan_.transfer(g.kx(i), g.ky(j), dz);
        return inverse_spectrum(s);
    }

    ComplexField2D field(double dz) const { return crop_centered(padded_field(dz), plan_.grid); }

    /// E(x, y_fixed, dz) along the padded x axis. Costs one pass over the
    /// spectrum plus a 1-D transform instead of a full 2-D inverse.
    std::vector<cplx> line_x(double dz, double y = 0.0) const
    {
        check(dz);
        const Grid2D& g = padded_grid();
        std::vector<cplx> row(g.nx(), 0.0);
        for (std::size_t j = 0; j < g.ny(); ++j) {
            const cplx ey = std::polar(1.0, g.ky(j) * y);
            for (std::size_t i = 0; i < g.nx(); ++i)
                row[i] += spectrum_(i, j) * plan_.transfer(g.kx(i), g.ky(j), dz) * ey;
        }
        dft1_centered(row, +1);
        const double scale = g.dkx() * g.dky();
        for (auto& v : row) v *= scale;
        return row;
    }

    /// E(0, 0, dz): the inverse transform evaluated at the origin only.
    cplx on_axis(double dz) const
    {
        check(dz);
        const Grid2D& g = padded_grid();
        cplx acc = 0.0;
        for (std::size_t j = 0; j < g.ny(); ++j)
            for (std::size_t i = 0; i < g.nx(); ++i) acc += spectrum_(i, j) * plan_.transfer(g.kx(i), g.ky(j), dz);
        return acc * g.dkx() * g.dky();
    }

    /// E(0, 0, z) at z = z0 + n dz, n < count. Each spectral phasor is advanced
    /// by repeated multiplication, so a scan costs one complex product per
    /// bin and plane.
    std::vector<cplx> on_axis_scan(double z0, double dz, std::size_t count) const
    {
        require(count >= 1 && std::isfinite(dz) && dz >= 0.0, "on_axis_scan: invalid z range");
        check(z0);
        check(z0 + dz * static_cast<double>(count - 1));
        const Grid2D& g = padded_grid();
        std::vector<cplx> acc(count, 0.0);
        for (std::size_t j = 0; j < g.ny(); ++j)
            for (std::size_t i = 0; i < g.nx(); ++i) {
                const cplx a = spectrum_(i, j);
                if (a == 0.0) continue;
                cplx ph = a * plan_.transfer(g.kx(i), g.ky(j), z0);
                const cplx step = plan_.transfer(g.kx(i), g.ky(j), dz);
                for (std::size_t n = 0; n < count; ++n) {
                    acc[n] += ph;
                    ph *= step;
                }
            }
        for (auto& v : acc) v *= g.dkx() * g.dky();
        return acc;
    }

private:
    PropagationPlan plan_;
    Spectrum2D spectrum_;
    WalkoffEstimate walkoff_{};
};

/// Field at distance dz on the original grid (zero-padded, propagated, cropped).
inline ComplexField2D propagate(const ComplexField2D& field, double dz, const PropagationPlan& plan)
{
    require(std::isfinite(dz) && dz >= 0.0, "propagate: dz must be finite and >= 0");
    return PropagationSource(field, plan).field(dz);
}

/// One propagate() per z, sharing the forward transform.
inline std::vector<ComplexField2D> propagate_to_planes(const ComplexField2D& field, const std::vector<double>& zs,
                                                       const PropagationPlan& plan)
{
    for (double z : zs) require(std::isfinite(z) && z >= 0.0, "propagate_to_planes: every z must be finite and >= 0");
    PropagationSource src(field, plan);
    for (double z : zs) src.check(z);
    std::vector<ComplexField2D> out(zs.size(), ComplexField2D(plan.grid));
    parallel_for(zs.size(), [&](std::size_t n) { out[n] = src.field(zs[n]); });
    return out;
}

/// x coordinates of the padded lattice used by line cuts.
inline std::vector<double> padded_x_axis(const PropagationPlan& plan)
{
    const Grid2D g = plan.padded_grid();
    std::vector<double> xs(g.nx());
    for (std::size_t i = 0; i < g.nx(); ++i) xs[i] = g.x(i);
    return xs;
}

struct LineLobe {
    double peak_x = 0.0;
    double peak = 0.0;
    double fwhm = 0.0;  // full width at half maximum, linearly interpolated
};

/// Strongest sample of an intensity line cut and the width of the lobe
/// around it. Zero width when the lobe does not fall to half on both sides.
inline LineLobe main_lobe(const std::vector<double>& xs, const std::vector<double>& intensity)
{
    require(xs.size() == intensity.size() && xs.size() >= 3, "main_lobe: need matching axes with >= 3 samples");
    const std::size_t p = static_cast<std::size_t>(std::max_element(intensity.begin(), intensity.end()) - intensity.begin());
    LineLobe out{xs[p], intensity[p], 0.0};
    const double h = 0.5 * intensity[p];
    std::size_t l = p, r = p;
    while (l > 0 && intensity[l] > h) --l;
    while (r + 1 < xs.size() && intensity[r] > h) ++r;
    if (intensity[l] > h || intensity[r] > h || !(h > 0.0)) return out;
    auto cross = [&](std::size_t a, std::size_t b) {  // a below half, b above
        const double t = (h - intensity[a]) / (intensity[b] - intensity[a]);
        return xs[a] + t * (xs[b] - xs[a]);
    };
    out.fwhm = cross(r, r - 1) - cross(l, l + 1);
    return out;
}

/// 2 sqrt(var(x)) of an intensity line cut; equals w for a field exp(-x^2/w^2).
inline double second_moment_width(const std::vector<double>& xs, const std::vector<double>& intensity)
{
    require(xs.size() == intensity.size(), "second_moment_width: axis and data sizes differ");
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s0 += intensity[i];
        s1 += intensity[i] * xs[i];
        s2 += intensity[i] * xs[i] * xs[i];
    }
    require(s0 > 0.0, "second_moment_width: zero intensity");
    const double m = s1 / s0;
    return 2.0 * std::sqrt(std::max(0.0, s2 / s0 - m * m));
}

/// Second-moment radius 2 sqrt(<x^2> - <x>^2) of |E|^2 along x; equals w for
/// a Gaussian field exp(-x^2/w^2).
inline double second_moment_width_x(const ComplexField2D& f)
{
    const Grid2D& g = f.grid();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double e = std::norm(f(i, j));
            const double x = g.x(i);
            s0 += e;
            s1 += e * x;
            s2 += e * x * x;
        }
    require(s0 > 0.0, "second_moment_width_x: zero field");
    const double m = s1 / s0;
    return 2.0 * std::sqrt(std::max(0.0, s2 / s0 - m * m));
}

}  // namespace ris
