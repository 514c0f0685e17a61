#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "beams.hpp"
#include "fft.hpp"

namespace ris {

// ---------------------------------------------------------------- shapes

struct RectShape {
    double Lx, Ly;
    double cx = 0.0, cy = 0.0;
};
struct CircleShape {
    double R;
    double cx = 0.0, cy = 0.0;
};
/// Absorptive sinc taper inside an Lx x Ly rectangle; `lobes` sets how many
/// sinc half-periods fit across each half-aperture.
struct SincShape {
    double Lx, Ly;
    int lobes = 1;
    double cx = 0.0, cy = 0.0;
};
struct CustomShape {
    std::function<double(double, double)> fn;  // values in [0, 1]
};
using ShapeMask = std::variant<RectShape, CircleShape, SincShape, CustomShape>;

namespace detail {

// 1 inside, 1/2 on the boundary, 0 outside. A lattice that puts samples
// exactly on both edges then integrates the aperture area exactly
// (trapezoid rule).
inline double edge_weight(double u, double half, double pitch)
{
    const double tol = 1e-9 * pitch;
    const double a = std::abs(u);
    if (a < half - tol) return 1.0;
    if (a <= half + tol) return 0.5;
    return 0.0;
}

inline double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

inline void check_fits(const Grid2D& g, double xmin, double xmax, double ymin, double ymax, const char* what)
{
    const double tol = 1e-9 * std::max(g.dx(), g.dy());
    const double gx0 = g.x(0), gx1 = g.x(g.nx() - 1);
    const double gy0 = g.y(0), gy1 = g.y(g.ny() - 1);
    if (xmin < gx0 - tol || xmax > gx1 + tol || ymin < gy0 - tol || ymax > gy1 + tol) {
        std::ostringstream os;
        os << what << " support [" << xmin << ", " << xmax << "] x [" << ymin << ", " << ymax
           << "] m does not fit in the grid [" << gx0 << ", " << gx1 << "] x [" << gy0 << ", " << gy1
           << "] m; enlarge the grid";
        throw ValidationError(os.str());
    }
}

}  // namespace detail

/// Samples a shape on the grid; every value lies in [0, 1].
inline std::vector<double> sample_shape(const ShapeMask& shape, const Grid2D& g)
{
    std::vector<double> w(g.size(), 0.0);
    struct Visitor {
        const Grid2D& g;
        std::vector<double>& w;
        void operator()(const RectShape& s) const
        {
            require(s.Lx > 0.0 && s.Ly > 0.0, "RectShape: side lengths must be positive");
            detail::check_fits(g, s.cx - s.Lx / 2, s.cx + s.Lx / 2, s.cy - s.Ly / 2, s.cy + s.Ly / 2, "rect shape");
            for (std::size_t j = 0; j < g.ny(); ++j) {
                const double wy = detail::edge_weight(g.y(j) - s.cy, s.Ly / 2, g.dy());
                if (wy == 0.0) continue;
                for (std::size_t i = 0; i < g.nx(); ++i)
                    w[g.index(i, j)] = wy * detail::edge_weight(g.x(i) - s.cx, s.Lx / 2, g.dx());
            }
        }
        void operator()(const CircleShape& s) const
        {
            require(s.R > 0.0, "CircleShape: radius must be positive");
            detail::check_fits(g, s.cx - s.R, s.cx + s.R, s.cy - s.R, s.cy + s.R, "circle shape");
            for (std::size_t j = 0; j < g.ny(); ++j)
                for (std::size_t i = 0; i < g.nx(); ++i)
                    w[g.index(i, j)] =
                        detail::edge_weight(std::hypot(g.x(i) - s.cx, g.y(j) - s.cy), s.R, std::min(g.dx(), g.dy()));
        }
        void operator()(const SincShape& s) const
        {
            require(s.Lx > 0.0 && s.Ly > 0.0, "SincShape: side lengths must be positive");
            require(s.lobes >= 1, "SincShape: lobes must be >= 1");
            detail::check_fits(g, s.cx - s.Lx / 2, s.cx + s.Lx / 2, s.cy - s.Ly / 2, s.cy + s.Ly / 2, "sinc shape");
            const double m = s.lobes;
            for (std::size_t j = 0; j < g.ny(); ++j) {
                const double y = g.y(j) - s.cy;
                const double wy = detail::edge_weight(y, s.Ly / 2, g.dy());
                if (wy == 0.0) continue;
                for (std::size_t i = 0; i < g.nx(); ++i) {
                    const double x = g.x(i) - s.cx;
                    const double wx = detail::edge_weight(x, s.Lx / 2, g.dx());
                    if (wx == 0.0) continue;
                    const double t = detail::sinc(2.0 * pi * m * x / s.Lx) * detail::sinc(2.0 * pi * m * y / s.Ly);
                    w[g.index(i, j)] = wx * wy * std::max(0.0, t);
                }
            }
        }
        void operator()(const CustomShape& s) const
        {
            require(static_cast<bool>(s.fn), "CustomShape: sample function is empty");
            for (std::size_t j = 0; j < g.ny(); ++j)
                for (std::size_t i = 0; i < g.nx(); ++i) {
                    const double v = s.fn(g.x(i), g.y(j));
                    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, "CustomShape: values must lie in [0, 1]");
                    w[g.index(i, j)] = v;
                }
        }
    };
    std::visit(Visitor{g, w}, shape);
    return w;
}

/// Sum of the sampled shapes; they must not overlap (sum <= 1 everywhere).
inline std::vector<double> sample_shape_union(const std::vector<ShapeMask>& shapes, const Grid2D& g)
{
    std::vector<double> w(g.size(), 0.0);
    for (const auto& s : shapes) {
        auto part = sample_shape(s, g);
        for (std::size_t n = 0; n < w.size(); ++n) w[n] += part[n];
    }
    for (double v : w) require(v <= 1.0 + 1e-12, "sample_shape_union: shapes overlap");
    return w;
}

/// Whole-grid support (an effectively infinite RIS).
inline ShapeMask full_grid_shape() { return CustomShape{[](double, double) { return 1.0; }}; }

// ---------------------------------------------------------------- masks

/// Per-sample reflection coefficient Γ(x, y) together with its shape support.
class RISMask {
public:
    RISMask(ComplexField2D gamma, std::vector<double> support, std::string operation)
        : gamma_(std::move(gamma)), support_(std::move(support)), operation_(std::move(operation))
    {
        require(support_.size() == gamma_.size(), "RISMask: support size does not match grid");
        for (std::size_t n = 0; n < support_.size(); ++n) {
            if (support_[n] == 0.0) gamma_[n] = 0.0;
            peak_ = std::max(peak_, std::abs(gamma_[n]));
        }
    }

    const Grid2D& grid() const { return gamma_.grid(); }
    const ComplexField2D& gamma() const { return gamma_; }
    const std::vector<double>& support() const { return support_; }
    const std::string& operation() const { return operation_; }
    /// max |Γ|; above 1 only for power-normalised multibeam masks.
    double peak_magnitude() const { return peak_; }
    bool passive() const { return peak_ <= 1.0 + 1e-12; }

private:
    ComplexField2D gamma_;
    std::vector<double> support_;
    std::string operation_;
    double peak_ = 0.0;
};

struct SteerSpec {
    double theta_i = 0.0, theta_r = 0.0;  // rad
    double k0 = 0.0;
    double gamma0 = 1.0;

    void validate() const
    {
        require(std::abs(theta_i) < pi / 2 && std::abs(theta_r) < pi / 2, "SteerSpec: |theta| must be below 90 deg");
        require(k0 > 0.0, "SteerSpec: k0 must be positive");
        require(gamma0 > 0.0 && gamma0 <= 1.0, "SteerSpec: gamma0 must lie in (0, 1]");
    }
};

/// Γ = Γ0 · shape · e^{j k0 (sin θr − sin θi) x}.
inline RISMask steering_mask(const SteerSpec& spec, const ShapeMask& shape, const Grid2D& g)
{
    spec.validate();
    const double dk = spec.k0 * (std::sin(spec.theta_r) - std::sin(spec.theta_i));
    check_tilt_resolved(dk, g, "steering_mask");
    auto w = sample_shape(shape, g);
    auto gamma = ComplexField2D::generate(
        g, [&](std::size_t i, std::size_t j) { return spec.gamma0 * w[g.index(i, j)] * std::polar(1.0, dk * g.x(i)); });
    return RISMask(std::move(gamma), std::move(w), "steer");
}

inline ComplexField2D apply_mask(const RISMask& mask, const ComplexField2D& incident)
{
    if (!(mask.grid() == incident.grid())) throw ValidationError("apply_mask: mask and incident field grids differ");
    ComplexField2D out(incident.grid());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = mask.gamma()[n] * incident[n];
    return out;
}

inline Spectrum2D reflected_spectrum(const RISMask& mask, const ComplexField2D& incident)
{
    return forward_spectrum(apply_mask(mask, incident));
}

// ---------------------------------------------------------------- multibeam

struct BeamWeight {
    double theta_r;  // rad
    double weight;
};

struct MultiBeamSpec {
    std::vector<BeamWeight> beams;
    double theta_i = 0.0;
    double k0 = 0.0;
    double gamma0 = 1.0;

    void validate() const
    {
        require(!beams.empty(), "MultiBeamSpec: at least one beam is required");
        bool any = false;
        for (const auto& b : beams) {
            require(std::abs(b.theta_r) < pi / 2, "MultiBeamSpec: |theta_r| must be below 90 deg");
            require(b.weight >= 0.0 && std::isfinite(b.weight), "MultiBeamSpec: weights must be >= 0");
            any = any || b.weight > 0.0;
        }
        require(any, "MultiBeamSpec: all weights are zero");
        require(std::abs(theta_i) < pi / 2, "MultiBeamSpec: |theta_i| must be below 90 deg");
        require(k0 > 0.0, "MultiBeamSpec: k0 must be positive");
        require(gamma0 > 0.0 && gamma0 <= 1.0, "MultiBeamSpec: gamma0 must lie in (0, 1]");
    }
};

/// Γ = shape · Σ (w_n/w0) Γ0 e^{j(k_{r,n} − k_i)x}. The normalisation w0
/// makes the reflected power inside the RIS equal the incident power inside
/// it, with RIS-area integrals taken as sums weighted by shape². When
/// `incident` is null the RIS is treated as uniformly illuminated.
inline RISMask multibeam_mask(const MultiBeamSpec& spec, const ShapeMask& shape, const Grid2D& g,
                              const ComplexField2D* incident = nullptr)
{
    spec.validate();
    if (incident) require(incident->grid() == g, "multibeam_mask: incident field grid differs from mask grid");
    const double ki = spec.k0 * std::sin(spec.theta_i);
    std::vector<double> dk;
    for (const auto& b : spec.beams) {
        dk.push_back(spec.k0 * std::sin(b.theta_r) - ki);
        check_tilt_resolved(dk.back(), g, "multibeam_mask");
    }
    auto w = sample_shape(shape, g);
    auto sum = ComplexField2D::generate(g, [&](std::size_t i, std::size_t) {
        cplx s = 0.0;
        for (std::size_t n = 0; n < dk.size(); ++n) s += spec.beams[n].weight * std::polar(1.0, dk[n] * g.x(i));
        return spec.gamma0 * s;
    });
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double inc = incident ? std::norm((*incident)[n]) : 1.0;
        const double a = w[n] * w[n] * inc;
        num += a * std::norm(sum[n]);
        den += a;
    }
    require(den > 0.0, "multibeam_mask: no incident power inside the RIS");
    if (!(num > 0.0)) throw NumericalError("multibeam_mask: composite mask vanishes on the illuminated RIS");
    const double w0 = std::sqrt(num / den);
    for (std::size_t n = 0; n < g.size(); ++n) sum[n] *= w[n] / w0;
    return RISMask(std::move(sum), std::move(w), "multibeam");
}

/// ∬ shape² |E|² over the RIS (Riemann sum).
inline double power_on_ris(const ComplexField2D& f, const std::vector<double>& support)
{
    require(support.size() == f.size(), "power_on_ris: support size mismatch");
    double s = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) s += support[n] * support[n] * std::norm(f[n]);
    return s * f.grid().cell_area();
}

// ---------------------------------------------------------------- band-pass

struct FilterSpec {
    double k_pass = 0.0;   // filter centre k_i, rad/m
    double k_width = 0.0;  // k_F, rad/m
    double k_steer = 0.0;  // k_r, rad/m
    double gamma0 = 1.0;

    void validate() const
    {
        require(k_width > 0.0 && std::isfinite(k_width), "FilterSpec: k_F must be positive");
        require(gamma0 > 0.0 && gamma0 <= 1.0, "FilterSpec: gamma0 must lie in (0, 1]");
    }
};

/// Gaussian k-space band-pass around k_pass followed by a shift to k_steer:
///   E_r = Γ0 e^{j(k_r − k_i)x} · IFFT[ e^{−(kx − k_i)²/2k_F²} FFT[E_i] ].
/// The shift is applied as a real-space modulation, so k_r − k_i need not lie
/// on the k lattice. A shape, when given, weights the incident field by the
/// RIS shape and confines the output to the RIS support.
inline ComplexField2D bandpass_reflect(const FilterSpec& spec, const ComplexField2D& incident,
                                       const ShapeMask* shape = nullptr)
{
    spec.validate();
    const Grid2D& g = incident.grid();
    if (spec.k_width < g.dkx()) {
        std::ostringstream os;
        os << "bandpass_reflect: k_F=" << spec.k_width << " rad/m is below one k-bin (" << g.dkx()
           << " rad/m); enlarge the grid";
        throw ValidationError(os.str());
    }
    const double shift = spec.k_steer - spec.k_pass;
    check_tilt_resolved(shift, g, "bandpass_reflect");
    std::vector<double> w;
    ComplexField2D in = incident;
    if (shape) {
        w = sample_shape(*shape, g);
        for (std::size_t n = 0; n < in.size(); ++n) in[n] *= w[n];
    }
    auto s = forward_spectrum(in);
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double d = g.kx(i) - spec.k_pass;
            s(i, j) *= std::exp(-d * d / (2.0 * spec.k_width * spec.k_width));
        }
    auto out = inverse_spectrum(s, g);
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            if (shape && w[g.index(i, j)] == 0.0) {
                out(i, j) = 0.0;
                continue;
            }
            out(i, j) *= spec.gamma0 * std::polar(1.0, shift * g.x(i));
        }
    return out;
}

// ---------------------------------------------------------------- wavefronts

enum class WavefrontSymmetry { radial, x_only };

struct WavefrontSpec {
    double a = 0.0;      // rad / m^gamma
    double gamma = 1.0;  // exponent
    WavefrontSymmetry symmetry = WavefrontSymmetry::radial;
    double theta_i = 0.0;
    double k0 = 0.0;
    double gamma0 = 1.0;

    void validate() const
    {
        require(gamma > 0.0 && std::isfinite(gamma), "WavefrontSpec: gamma must be positive");
        require(std::isfinite(a), "WavefrontSpec: a must be finite");
        require(std::abs(theta_i) < pi / 2, "WavefrontSpec: |theta_i| must be below 90 deg");
        require(k0 > 0.0, "WavefrontSpec: k0 must be positive");
        require(gamma0 > 0.0 && gamma0 <= 1.0, "WavefrontSpec: gamma0 must lie in (0, 1]");
    }

    /// Power-law phase a·ρ^γ (radial) or a·sign(x)|x|^γ (x_only).
    double profile_phase(double x, double y) const
    {
        if (symmetry == WavefrontSymmetry::radial) return a * std::pow(std::hypot(x, y), gamma);
        return a * std::copysign(std::pow(std::abs(x), gamma), x);
    }
};

inline WavefrontSpec focus_preset(double focal_distance, double k0, double theta_i = 0.0)
{
    require(focal_distance > 0.0, "focus_preset: focal distance must be positive");
    return {-k0 / (2.0 * focal_distance), 2.0, WavefrontSymmetry::radial, theta_i, k0, 1.0};
}

inline WavefrontSpec bessel_preset(double C, double k0, double theta_i = 0.0)
{
    require(C > 0.0, "bessel_preset: C must be positive");
    return {-k0 * C, 1.0, WavefrontSymmetry::radial, theta_i, k0, 1.0};
}

inline WavefrontSpec airy_preset(double beta, double k0, double theta_i = 0.0)
{
    require(beta > 0.0, "airy_preset: beta must be positive");
    return {-(4.0 / 3.0) * k0 * std::sqrt(beta), 1.5, WavefrontSymmetry::x_only, theta_i, k0, 1.0};
}

/// Γ = Γ0 · shape · e^{−j k_i x} · e^{j a ρ^γ}. Rejects profiles whose phase
/// changes by π or more between neighbouring samples on the support.
inline RISMask wavefront_mask(const WavefrontSpec& spec, const ShapeMask& shape, const Grid2D& g)
{
    spec.validate();
    const double ki = spec.k0 * std::sin(spec.theta_i);
    auto w = sample_shape(shape, g);
    auto phase = [&](std::size_t i, std::size_t j) { return spec.profile_phase(g.x(i), g.y(j)) - ki * g.x(i); };
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            if (w[g.index(i, j)] == 0.0) continue;
            const double p = phase(i, j);
            auto check = [&](std::size_t i2, std::size_t j2) {
                if (w[g.index(i2, j2)] == 0.0) return;
                const double step = std::abs(phase(i2, j2) - p);
                if (step >= pi) {
                    std::ostringstream os;
                    os << "wavefront_mask: phase step " << step << " rad between neighbouring samples at radius "
                       << std::hypot(g.x(i), g.y(j)) << " m exceeds pi; use a finer pitch or a smaller aperture";
                    throw ValidationError(os.str());
                }
            };
            if (i + 1 < g.nx()) check(i + 1, j);
            if (j + 1 < g.ny()) check(i, j + 1);
        }
    auto gamma = ComplexField2D::generate(
        g, [&](std::size_t i, std::size_t j) { return spec.gamma0 * w[g.index(i, j)] * std::polar(1.0, phase(i, j)); });
    return RISMask(std::move(gamma), std::move(w), "wavefront");
}

/// Per-element table (x, y, |Γ|, arg Γ) over the mask support.
inline void write_mask_csv(std::ostream& os, const RISMask& mask)
{
    const Grid2D& g = mask.grid();
    os << "x,y,abs_gamma,arg_gamma\n" << std::setprecision(17);
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            if (mask.support()[g.index(i, j)] == 0.0) continue;
            const cplx v = mask.gamma()(i, j);
            os << g.x(i) << ',' << g.y(j) << ',' << std::abs(v) << ',' << std::arg(v) << '\n';
        }
}

/// Grid for an nx_el x ny_el element RIS at the given pitch. For even counts
/// both aperture edges land on lattice points; `margin` extra samples are
/// added on each side.
inline Grid2D ris_grid(std::size_t nx_el, std::size_t ny_el, double pitch_x, double pitch_y, std::size_t margin = 0)
{
    require(nx_el > 0 && ny_el > 0, "ris_grid: element counts must be positive");
    auto even = [](std::size_t n) { return n + (n % 2); };
    return {even(nx_el + 2) + 2 * margin, even(ny_el + 2) + 2 * margin, pitch_x, pitch_y};
}

}  // namespace ris
