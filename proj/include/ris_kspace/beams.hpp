#pragma once

#include <cmath>
#include <sstream>
#include <variant>

#include "grid.hpp"

namespace ris {

/// Gaussian beam footprint on the RIS plane.
struct GaussianBeamSpec {
    double amplitude = 1.0;     // E0, V/m
    double waist_at_ris = 0.0;  // beam radius at normal incidence, m
    double theta_i = 0.0;       // rad
    double k0 = 0.0;            // rad/m

    double k_incident() const { return k0 * std::sin(theta_i); }

    void validate() const
    {
        require(waist_at_ris > 0.0 && std::isfinite(waist_at_ris), "GaussianBeamSpec: waist must be positive");
        require(std::abs(theta_i) < pi / 2.0, "GaussianBeamSpec: |theta_i| must be below 90 deg");
        require(k0 > 0.0 && std::isfinite(k0), "GaussianBeamSpec: k0 must be positive");
        require(std::isfinite(amplitude), "GaussianBeamSpec: amplitude must be finite");
    }
};

/// Access point feeding the RIS.
struct ApSpec {
    double power = 1.0;     // Pt, W
    double gain = 1.0;      // Gt, linear
    double distance = 1.0;  // d_AP, m

    void validate() const
    {
        require(power > 0.0, "ApSpec: transmit power must be positive");
        require(gain >= 1.0, "ApSpec: gain must be >= 1");
        require(distance > 0.0, "ApSpec: distance must be positive");
    }
};

inline void check_tilt_resolved(double k_tilt, const Grid2D& grid, const char* who)
{
    if (!(std::abs(k_tilt) < grid.nyquist_kx())) {
        std::ostringstream os;
        os << who << ": phase tilt " << k_tilt << " rad/m is not resolved by pitch dx=" << grid.dx()
           << " m (Nyquist " << grid.nyquist_kx() << " rad/m); use a finer grid";
        throw ValidationError(os.str());
    }
}

/// E0 exp(-(x^2 cos^2θi + y^2)/w^2) e^{+j k_i x} sampled on the grid. The
/// +j sign keeps the spectrum centred at +k0 sin θi under the library's
/// forward transform.
inline ComplexField2D gaussian_footprint(const GaussianBeamSpec& spec, const Grid2D& grid)
{
    spec.validate();
    const double ki = spec.k_incident();
    check_tilt_resolved(ki, grid, "gaussian_footprint");
    const double c = std::cos(spec.theta_i);
    const double w2 = spec.waist_at_ris * spec.waist_at_ris;
    return ComplexField2D::generate(grid, [&](std::size_t i, std::size_t j) {
        const double x = grid.x(i), y = grid.y(j);
        return spec.amplitude * std::exp(-(x * x * c * c + y * y) / w2) * std::polar(1.0, ki * x);
    });
}

/// Closed-form spectrum of gaussian_footprint in the library convention:
/// E0 π w^2 / (cos θi (2π)^2) · exp(-w^2/4 ((kx-k_i)^2/cos^2θi + ky^2)).
class GaussianSpectrum {
public:
    explicit GaussianSpectrum(const GaussianBeamSpec& spec) : spec_(spec) { spec_.validate(); }

    cplx operator()(double kx, double ky) const
    {
        const double c = std::cos(spec_.theta_i);
        const double w2 = spec_.waist_at_ris * spec_.waist_at_ris;
        const double dk = kx - spec_.k_incident();
        const double peak = spec_.amplitude * pi * w2 / (c * 4.0 * pi * pi);
        return peak * std::exp(-w2 / 4.0 * (dk * dk / (c * c) + ky * ky));
    }

    const GaussianBeamSpec& spec() const { return spec_; }

private:
    GaussianBeamSpec spec_;
};

inline GaussianSpectrum gaussian_spectrum(const GaussianBeamSpec& spec) { return GaussianSpectrum(spec); }

struct GaussianAperture {
    double waist;
};
struct DishAperture {
    double diameter;
};
struct PhasedArrayAperture {
    int elements;
    double spacing;
};
using ApertureModel = std::variant<GaussianAperture, DishAperture, PhasedArrayAperture>;

/// Relative k-content width Δk/k0 of the beam radiated by an aperture.
inline double k_content_width(const ApertureModel& model, double wavelength)
{
    require(wavelength > 0.0, "k_content_width: wavelength must be positive");
    struct Visitor {
        double lambda;
        double operator()(const GaussianAperture& a) const
        {
            require(a.waist > 0.0, "k_content_width: waist must be positive");
            return lambda / (2.0 * a.waist);
        }
        double operator()(const DishAperture& a) const
        {
            require(a.diameter > 0.0, "k_content_width: dish diameter must be positive");
            return 1.22 * lambda / a.diameter;
        }
        double operator()(const PhasedArrayAperture& a) const
        {
            require(a.elements > 0 && a.spacing > 0.0, "k_content_width: array size must be positive");
            return 1.2 * lambda / (a.elements * a.spacing);
        }
    };
    return std::visit(Visitor{wavelength}, model);
}

/// Waist of a Gaussian aperture with gain Gt = 4π (π w0^2/2) / λ^2.
inline double waist_for_gain(double gain, double wavelength)
{
    require(gain >= 1.0, "waist_for_gain: gain must be >= 1");
    return wavelength * std::sqrt(gain / (2.0 * pi * pi));
}

/// Maps an access point (Pt, Gt, d_AP) to the Gaussian footprint it lays on
/// the RIS: the waist follows from the gain, spreads over d_AP with standard
/// Gaussian-beam divergence, and E0 is set so the footprint carries Pt.
inline GaussianBeamSpec waist_from_gain(const ApSpec& ap, double k0, double theta_i = 0.0)
{
    ap.validate();
    require(k0 > 0.0, "waist_from_gain: k0 must be positive");
    const double lambda = 2.0 * pi / k0;
    const double w0 = waist_for_gain(ap.gain, lambda);
    const double zr = pi * w0 * w0 / lambda;
    const double w = w0 * std::sqrt(1.0 + (ap.distance / zr) * (ap.distance / zr));
    GaussianBeamSpec out;
    out.waist_at_ris = w;
    out.theta_i = theta_i;
    out.k0 = k0;
    out.amplitude = std::sqrt(4.0 * free_space_impedance * ap.power / (pi * w * w));
    return out;
}

/// Rayleigh range of a waist w0.
inline double rayleigh_range(double w0, double k0) { return k0 * w0 * w0 / 2.0; }

}  // namespace ris
