#pragma once

// Far-field received power from the reflected k-content:
//
//   P_r = A_r k0^2/(2 Z0) · Θ(θ, φ; θr) · |(2π)^2 Ẽ_r(kx, ky)|^2 / (4π r)^2,
//   kx = k0 sin θ cos φ,  ky = k0 sin θ sin φ.
//
// The (2π)^2 converts the library's normalised spectrum into the
// unnormalised transform the power formula is written for.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "beams.hpp"
#include "erf.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace ris {

struct Observation {
    double r = 1.0;      // m
    double theta = 0.0;  // rad, [0, π/2)
    double phi = 0.0;    // rad
    double area = 1.0;   // receiver aperture A_r, m^2

    void validate() const
    {
        require(r > 0.0 && std::isfinite(r), "Observation: r must be positive");
        require(theta >= 0.0 && theta < pi / 2, "Observation: theta must lie in [0, 90) deg");
        require(std::isfinite(phi), "Observation: phi must be finite");
        require(area > 0.0, "Observation: receiver area must be positive");
    }

    double kx(double k0) const { return k0 * std::sin(theta) * std::cos(phi); }
    double ky(double k0) const { return k0 * std::sin(theta) * std::sin(phi); }
};

/// Observation at a signed angle in the plane φ: negative θ is folded to
/// (|θ|, φ + π).
inline Observation observation_in_plane(double r, double signed_theta, double phi, double area)
{
    Observation o{r, std::abs(signed_theta), signed_theta < 0.0 ? phi + pi : phi, area};
    o.validate();
    return o;
}

inline double theta_factor(double theta, double phi, double theta_r)
{
    const double s = std::sin(phi), c = std::cos(phi);
    const double a = 1.0 + std::cos(theta) * std::cos(theta_r);
    const double b = std::cos(theta) + std::cos(theta_r);
    return s * s * a * a + c * c * b * b;
}

inline double fraunhofer_distance(double Lx, double Ly, double wavelength)
{
    require(Lx > 0.0 && Ly > 0.0 && wavelength > 0.0, "fraunhofer_distance: sizes must be positive");
    return 2.0 * std::max(Lx * Lx, Ly * Ly) / wavelength;
}

/// Power formula for a given spectral value; no far-field check.
inline double received_power_from_spectrum(const Observation& obs, cplx spectrum_value, double k0, double theta_r)
{
    const double four_pi_r = 4.0 * pi * obs.r;
    const double amp2 = std::norm(spectrum_value * (4.0 * pi * pi));
    return obs.area * k0 * k0 / (2.0 * free_space_impedance) * theta_factor(obs.theta, obs.phi, theta_r) * amp2 /
           (four_pi_r * four_pi_r);
}

inline void check_far_field(const Observation& obs, double Lx, double Ly, double k0)
{
    const double rf = fraunhofer_distance(Lx, Ly, 2.0 * pi / k0);
    if (!(obs.r > rf)) {
        std::ostringstream os;
        os << "far-field power requested at r=" << obs.r << " m, inside the Fraunhofer distance " << rf
           << " m of a " << Lx << " x " << Ly << " m aperture";
        throw ValidationError(os.str());
    }
}

/// Closed-form reflected spectrum of a Gaussian footprint on an Lx x Ly
/// rectangular RIS steering towards θr:
///   Ẽ_r(kx, ky) = Γ0 Ẽ_i(kx + k_i − k_r, ky) R(kx, ky),
///   R = Re erf(qx) · Re erf(qy),
///   qx = (Lx cos θi / w + j (kx − k_r) w / cos θi)/2,  qy = (Ly / w + j ky w)/2.
class AnalyticReflectedSpectrum {
public:
    AnalyticReflectedSpectrum(const GaussianBeamSpec& beam, double Lx, double Ly, double theta_r, double gamma0 = 1.0)
        : beam_(beam), Lx_(Lx), Ly_(Ly), theta_r_(theta_r), gamma0_(gamma0)
    {
        beam_.validate();
        require(Lx > 0.0 && Ly > 0.0, "AnalyticReflectedSpectrum: RIS size must be positive");
        require(std::abs(theta_r) < pi / 2, "AnalyticReflectedSpectrum: |theta_r| must be below 90 deg");
        require(gamma0 > 0.0 && gamma0 <= 1.0, "AnalyticReflectedSpectrum: gamma0 must lie in (0, 1]");
    }

    double k0() const { return beam_.k0; }
    double k_r() const { return beam_.k0 * std::sin(theta_r_); }
    double theta_r() const { return theta_r_; }
    double Lx() const { return Lx_; }
    double Ly() const { return Ly_; }
    const GaussianBeamSpec& beam() const { return beam_; }

    cplx qx(double kx) const
    {
        const double c = std::cos(beam_.theta_i), w = beam_.waist_at_ris;
        return 0.5 * cplx(Lx_ * c / w, (kx - k_r()) * w / c);
    }
    cplx qy(double ky) const
    {
        const double w = beam_.waist_at_ris;
        return 0.5 * cplx(Ly_ / w, ky * w);
    }

    /// Boundary window R through complex_erf. Throws DomainError naming
    /// (kx, ky) where erf would overflow.
    cplx window(double kx, double ky) const
    {
        try {
            const cplx ex = complex_erf(qx(kx)), ey = complex_erf(qy(ky));
            const cplx ex_c = complex_erf(std::conj(qx(kx))), ey_c = complex_erf(std::conj(qy(ky)));
            return (ex + ex_c) * 0.5 * ((ey + ey_c) * 0.5);
        } catch (const DomainError& e) {
            std::ostringstream os;
            os << "boundary window at (kx, ky) = (" << kx << ", " << ky << ") rad/m: " << e.what();
            throw DomainError(os.str());
        }
    }

    /// Ẽ_r(kx, ky). The Gaussian factor equals e^{-(Im qx)^2 - (Im qy)^2}, so
    /// it is folded into the window and never overflows.
    cplx operator()(double kx, double ky) const
    {
        const double c = std::cos(beam_.theta_i), w = beam_.waist_at_ris;
        const double peak = beam_.amplitude * pi * w * w / (c * 4.0 * pi * pi);
        return gamma0_ * peak * erf_real_scaled(qx(kx)) * erf_real_scaled(qy(ky));
    }

private:
    GaussianBeamSpec beam_;
    double Lx_, Ly_, theta_r_, gamma0_;
};

inline AnalyticReflectedSpectrum analytic_reflected_spectrum(const GaussianBeamSpec& beam, double Lx, double Ly,
                                                             double theta_r, double gamma0 = 1.0)
{
    return {beam, Lx, Ly, theta_r, gamma0};
}

inline double received_power_analytic(const Observation& obs, const AnalyticReflectedSpectrum& spec)
{
    obs.validate();
    check_far_field(obs, spec.Lx(), spec.Ly(), spec.k0());
    return received_power_from_spectrum(obs, spec(obs.kx(spec.k0()), obs.ky(spec.k0())), spec.k0(), spec.theta_r());
}

inline constexpr std::size_t default_farfield_pad = 8;

/// Far-field limit of the angular spectrum of a reflected footprint: the
/// zero-padded FFT spectrum, bilinearly interpolated at the observation k.
class NumericFarField {
public:
    NumericFarField(const ComplexField2D& footprint, double k0, std::size_t pad = default_farfield_pad)
        : k0_(k0), spectrum_(footprint.grid())
    {
        require(k0 > 0.0, "NumericFarField: k0 must be positive");
        require(pad >= 1, "NumericFarField: pad must be >= 1");
        const Grid2D& g = footprint.grid();
        const Grid2D pg = g.resized(fft_friendly_size(g.nx() * pad), fft_friendly_size(g.ny() * pad));
        spectrum_ = forward_spectrum(embed_centered(footprint, pg));
        // aperture extent for the far-field check: bounding box of non-negligible samples
        double peak = 0.0;
        for (const auto& v : footprint.values()) peak = std::max(peak, std::norm(v));
        double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
        bool any = false;
        for (std::size_t j = 0; j < g.ny(); ++j)
            for (std::size_t i = 0; i < g.nx(); ++i) {
                if (!(std::norm(footprint(i, j)) > 1e-30 * peak)) continue;
                if (!any) {
                    x0 = x1 = g.x(i);
                    y0 = y1 = g.y(j);
                    any = true;
                }
                x0 = std::min(x0, g.x(i));
                x1 = std::max(x1, g.x(i));
                y0 = std::min(y0, g.y(j));
                y1 = std::max(y1, g.y(j));
            }
        Lx_ = any ? std::max(x1 - x0, g.dx()) : g.dx();
        Ly_ = any ? std::max(y1 - y0, g.dy()) : g.dy();
    }

    const Spectrum2D& spectrum() const { return spectrum_; }
    double k0() const { return k0_; }
    double aperture_x() const { return Lx_; }
    double aperture_y() const { return Ly_; }

    cplx spectrum_at(double kx, double ky) const
    {
        if (kx * kx + ky * ky > k0_ * k0_ * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "NumericFarField: (kx, ky) = (" << kx << ", " << ky << ") lies outside the propagating band |k| <= "
               << k0_;
            throw ValidationError(os.str());
        }
        const Grid2D& g = spectrum_.grid();
        const double fx = kx / g.dkx() + static_cast<double>(g.nx() / 2);
        const double fy = ky / g.dky() + static_cast<double>(g.ny() / 2);
        require(fx >= 0.0 && fy >= 0.0 && fx <= static_cast<double>(g.nx() - 1) &&
                    fy <= static_cast<double>(g.ny() - 1),
                "NumericFarField: observation k beyond the sampled k lattice");
        const std::size_t i = std::min(static_cast<std::size_t>(fx), g.nx() - 2);
        const std::size_t j = std::min(static_cast<std::size_t>(fy), g.ny() - 2);
        const double tx = fx - static_cast<double>(i), ty = fy - static_cast<double>(j);
        return (1 - tx) * (1 - ty) * spectrum_(i, j) + tx * (1 - ty) * spectrum_(i + 1, j) +
               (1 - tx) * ty * spectrum_(i, j + 1) + tx * ty * spectrum_(i + 1, j + 1);
    }

    double received_power(const Observation& obs, double theta_r, bool check_distance = true) const
    {
        obs.validate();
        if (check_distance) check_far_field(obs, Lx_, Ly_, k0_);
        return received_power_from_spectrum(obs, spectrum_at(obs.kx(k0_), obs.ky(k0_)), k0_, theta_r);
    }

private:
    double k0_;
    Spectrum2D spectrum_;
    double Lx_ = 0.0, Ly_ = 0.0;
};

inline double received_power_numeric(const Observation& obs, const ComplexField2D& reflected, double k0,
                                     double theta_r, std::size_t pad = default_farfield_pad)
{
    return NumericFarField(reflected, k0, pad).received_power(obs, theta_r);
}

// ---------------------------------------------------------------- patterns

struct FarFieldPattern {
    std::vector<double> theta;  // rad, signed angle in the plane φ, increasing
    std::vector<double> power;  // W
    double phi = 0.0;
    double r = 0.0;
    std::string scenario_hash;

    double max_power() const { return power.empty() ? 0.0 : *std::max_element(power.begin(), power.end()); }
    std::size_t argmax() const
    {
        return static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
    }
    double step() const { return theta.size() > 1 ? theta[1] - theta[0] : 0.0; }
};

/// Evaluates power(θ) on `steps` equally spaced angles in [theta_lo, theta_hi].
inline FarFieldPattern pattern_sweep(const std::function<double(double)>& power, double theta_lo, double theta_hi,
                                     std::size_t steps, double phi = 0.0, double r = 0.0)
{
    require(steps >= 2, "pattern_sweep: need at least two steps");
    require(theta_hi > theta_lo, "pattern_sweep: theta range must be increasing");
    require(theta_lo > -pi / 2 && theta_hi < pi / 2, "pattern_sweep: |theta| must stay below 90 deg");
    FarFieldPattern p;
    p.phi = phi;
    p.r = r;
    p.theta.resize(steps);
    p.power.resize(steps);
    for (std::size_t n = 0; n < steps; ++n)
        p.theta[n] = theta_lo + (theta_hi - theta_lo) * static_cast<double>(n) / static_cast<double>(steps - 1);
    parallel_for(steps, [&](std::size_t n) {
        const double v = power(p.theta[n]);
        if (!std::isfinite(v) || v < 0.0) throw NumericalError("pattern_sweep: invalid power value");
        p.power[n] = v;
    });
    return p;
}

inline void write_pattern_csv(std::ostream& os, const FarFieldPattern& p)
{
    const double peak = p.max_power();
    os << "theta_deg,P_r_W,P_r_dB\n" << std::setprecision(17);
    for (std::size_t n = 0; n < p.theta.size(); ++n) {
        os << rad2deg(p.theta[n]) << ',' << p.power[n] << ',';
        if (peak > 0.0 && p.power[n] > 0.0)
            os << 10.0 * std::log10(p.power[n] / peak);
        else
            os << "-inf";
        os << '\n';
    }
}

/// Sweep index of the largest power within |θ − center| <= half_width.
inline std::size_t peak_index_near(const FarFieldPattern& p, double center, double half_width)
{
    std::size_t best = p.theta.size();
    for (std::size_t n = 0; n < p.theta.size(); ++n) {
        if (std::abs(p.theta[n] - center) > half_width) continue;
        if (best == p.theta.size() || p.power[n] > p.power[best]) best = n;
    }
    require(best < p.theta.size(), "peak_index_near: no sweep sample inside the window");
    return best;
}

/// Local maxima of the pattern above `floor_fraction` of its peak.
inline std::vector<std::size_t> find_lobes(const FarFieldPattern& p, double floor_fraction)
{
    std::vector<std::size_t> out;
    const double floor = floor_fraction * p.max_power();
    for (std::size_t n = 0; n < p.power.size(); ++n) {
        const double v = p.power[n];
        const bool left = n == 0 || v > p.power[n - 1];
        const bool right = n + 1 == p.power.size() || v >= p.power[n + 1];
        if (left && right && v > floor) out.push_back(n);
    }
    return out;
}

/// ∬|Ẽ|^2 dkx dky over propagating bins with kx in [kx_lo, kx_hi).
inline double band_power(const Spectrum2D& s, double k0, double kx_lo, double kx_hi)
{
    const Grid2D& g = s.grid();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double kx = g.kx(i), ky = g.ky(j);
            if (kx < kx_lo || kx >= kx_hi || kx * kx + ky * ky > k0 * k0) continue;
            acc += std::norm(s(i, j));
        }
    return acc * g.dkx() * g.dky();
}

/// Power radiated into the far-field directions with kx in [kx_lo, kx_hi):
/// r^2 P_r / A_r integrated over solid angle, dΩ = dkx dky / (k0 kz), with
/// Θ evaluated for the given θr.
inline double radiated_band_power(const Spectrum2D& s, double k0, double kx_lo, double kx_hi, double theta_r)
{
    const Grid2D& g = s.grid();
    const double c = k0 * k0 / (2.0 * free_space_impedance) / (16.0 * pi * pi);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double kx = g.kx(i), ky = g.ky(j);
            const double kt2 = kx * kx + ky * ky;
            if (kx < kx_lo || kx >= kx_hi || kt2 >= k0 * k0) continue;
            const double kz = std::sqrt(k0 * k0 - kt2);
            const double theta = std::asin(std::sqrt(kt2) / k0);
            const double phi = std::atan2(ky, kx);
            acc += theta_factor(theta, phi, theta_r) * std::norm(s(i, j) * (4.0 * pi * pi)) / (k0 * kz);
        }
    return c * acc * g.dkx() * g.dky();
}

/// kx intervals owned by lobes steered to the given increasing angles (rad,
/// along kx): each lobe owns the span between the midpoints to its neighbours.
inline std::vector<std::pair<double, double>> lobe_windows(double k0, const std::vector<double>& lobe_angles)
{
    require(!lobe_angles.empty(), "lobe_windows: no lobes");
    std::vector<double> k;
    for (double a : lobe_angles) k.push_back(k0 * std::sin(a));
    for (std::size_t n = 1; n < k.size(); ++n) require(k[n] > k[n - 1], "lobe_windows: angles must increase");
    std::vector<std::pair<double, double>> out;
    for (std::size_t n = 0; n < k.size(); ++n)
        out.emplace_back(n == 0 ? -k0 : 0.5 * (k[n - 1] + k[n]), n + 1 == k.size() ? k0 : 0.5 * (k[n] + k[n + 1]));
    return out;
}

namespace detail {
// the band edge kx = k0 belongs to the last lobe
inline double closed_end(const std::vector<std::pair<double, double>>& w, std::size_t n)
{
    return n + 1 == w.size() ? std::numeric_limits<double>::infinity() : w[n].second;
}
}  // namespace detail

/// Radiated power per lobe; Θ uses that lobe's own steering angle.
inline std::vector<double> lobe_powers(const Spectrum2D& s, double k0, const std::vector<double>& lobe_angles)
{
    const auto w = lobe_windows(k0, lobe_angles);
    std::vector<double> out;
    for (std::size_t n = 0; n < w.size(); ++n)
        out.push_back(radiated_band_power(s, k0, w[n].first, detail::closed_end(w, n), lobe_angles[n]));
    return out;
}

/// Spectral energy ∬|Ẽ|^2 per lobe window, without any radiation weighting.
inline std::vector<double> lobe_energies(const Spectrum2D& s, double k0, const std::vector<double>& lobe_angles)
{
    const auto w = lobe_windows(k0, lobe_angles);
    std::vector<double> out;
    for (std::size_t n = 0; n < w.size(); ++n) out.push_back(band_power(s, k0, w[n].first, detail::closed_end(w, n)));
    return out;
}

}  // namespace ris
