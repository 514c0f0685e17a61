#include <gtest/gtest.h>

#include "ris_kspace.hpp"

using namespace ris;

namespace {

constexpr double f_ghz = 150.0;
const double k0 = wavenumber_from_ghz(f_ghz);
const double lambda = wavelength_from_ghz(f_ghz);

GaussianBeamSpec beam(double w, double theta_i, double amp = 1.0)
{
    GaussianBeamSpec b;
    b.amplitude = amp;
    b.waist_at_ris = w;
    b.theta_i = theta_i;
    b.k0 = k0;
    return b;
}

// 1/e point of |E| along a sampled ray from the origin, linearly interpolated between samples
double one_over_e_radius(const ComplexField2D& f, bool along_x)
{
    const Grid2D& g = f.grid();
    const std::size_t ci = g.nx() / 2, cj = g.ny() / 2;
    const double peak = std::abs(f(ci, cj));
    const std::size_t n = along_x ? g.nx() : g.ny();
    for (std::size_t s = 1; s + (along_x ? ci : cj) < n; ++s) {
        const double a = std::abs(along_x ? f(ci + s - 1, cj) : f(ci, cj + s - 1)) / peak;
        const double b = std::abs(along_x ? f(ci + s, cj) : f(ci, cj + s)) / peak;
        if (b <= std::exp(-1.0)) {
            const double t = (a - std::exp(-1.0)) / (a - b);
            return (static_cast<double>(s - 1) + t) * (along_x ? g.dx() : g.dy());
        }
    }
    return 0.0;
}

}  // namespace

TEST(Footprint, PeakAndOneOverEPoint)
{
    const Grid2D g(200, 200, 0.01 / 50, 0.01 / 50);
    const auto b = beam(0.01, 0.0, 3.0);
    const auto f = gaussian_footprint(b, g);
    EXPECT_DOUBLE_EQ(std::abs(f(100, 100)), 3.0);
    // x = 50 samples = w exactly
    EXPECT_NEAR(std::abs(f(150, 100)) / 3.0, std::exp(-1.0), 1e-14);
    for (std::size_t j = 0; j < g.ny(); j += 7)
        for (std::size_t i = 0; i < g.nx(); i += 5) EXPECT_NEAR(std::abs(f(i, j)), std::abs(f(j, i)), 1e-15);
}

TEST(Footprint, EllipseElongationAtFortyFiveDegrees)
{
    // 150 GHz, w = 2 cm, 10 cm grid at λ/10
    const Grid2D g(500, 500, 0.1 / 500, 0.1 / 500);
    const auto f = gaussian_footprint(beam(0.02, deg2rad(45.0)), g);
    const double rx = one_over_e_radius(f, true), ry = one_over_e_radius(f, false);
    EXPECT_NEAR(rx / ry, std::sqrt(2.0), 1e-3);
}

TEST(Footprint, RejectsUnresolvedTilt)
{
    const Grid2D g(64, 64, lambda, lambda);  // Nyquist k0/2
    EXPECT_THROW(gaussian_footprint(beam(0.01, deg2rad(45.0)), g), ValidationError);
    EXPECT_THROW(gaussian_footprint(beam(-1.0, 0.0), Grid2D(8, 8, 1e-3, 1e-3)), ValidationError);
}

TEST(Footprint, CarriesTheGaussianPowerIntegral)
{
    const double w = 0.01, E0 = 2.5;
    const Grid2D g(400, 400, w / 40, w / 40);  // 10 w wide
    const auto f = gaussian_footprint(beam(w, 0.0, E0), g);
    const double p = field_energy(f) / (2.0 * free_space_impedance);
    EXPECT_NEAR(p / (pi * w * w * E0 * E0 / (4.0 * free_space_impedance)), 1.0, 1e-8);
}

TEST(Spectrum, FftMatchesClosedForm)
{
    for (double deg : {0.0, 20.0, 45.0}) {
        const double w = 0.01;
        const Grid2D g(256, 256, lambda / 4, lambda / 4);  // 12.8 cm ≥ 8 w wide
        const auto b = beam(w, deg2rad(deg), 1.7);
        const auto s = forward_spectrum(gaussian_footprint(b, g));
        const auto closed = gaussian_spectrum(b);
        double worst = 0.0, peak = 0.0;
        for (std::size_t j = 0; j < g.ny(); ++j)
            for (std::size_t i = 0; i < g.nx(); ++i) {
                const cplx c = closed(g.kx(i), g.ky(j));
                peak = std::max(peak, std::abs(c));
                worst = std::max(worst, std::abs(s(i, j) - c));
            }
        EXPECT_LE(worst, 1e-6 * peak) << deg;
    }
}

TEST(Spectrum, PeakSitsAtIncidentWavenumber)
{
    for (int n = -40; n <= 40; ++n) {
        const double th = deg2rad(2.0 * n);
        const auto sp = gaussian_spectrum(beam(0.02, th));
        const double ki = k0 * std::sin(th);
        // closed form is maximal at k_i and strictly smaller a little either side
        EXPECT_GT(std::abs(sp(ki, 0.0)), std::abs(sp(ki + 1.0, 0.0)));
        EXPECT_GT(std::abs(sp(ki, 0.0)), std::abs(sp(ki - 1.0, 0.0)));
    }
}

TEST(Spectrum, OneOverEHalfWidthScalesInverselyWithWaist)
{
    for (double w : {0.005, 0.01, 0.04}) {
        const auto sp = gaussian_spectrum(beam(w, 0.0));
        EXPECT_NEAR(std::abs(sp(2.0 / w, 0.0)) / std::abs(sp(0.0, 0.0)), std::exp(-1.0), 1e-14);
        EXPECT_NEAR(std::abs(sp(0.0, 2.0 / w)) / std::abs(sp(0.0, 0.0)), std::exp(-1.0), 1e-14);
    }
}

TEST(KContent, DocumentedExamples)
{
    EXPECT_NEAR(k_content_width(DishAperture{10 * lambda}, lambda), 0.122, 1e-12);
    EXPECT_NEAR(k_content_width(PhasedArrayAperture{20, lambda / 2}, lambda), 0.12, 1e-12);
    EXPECT_NEAR(k_content_width(GaussianAperture{lambda}, lambda), 0.5, 1e-12);
    EXPECT_THROW(k_content_width(DishAperture{0.0}, lambda), ValidationError);
    EXPECT_THROW(k_content_width(PhasedArrayAperture{0, lambda}, lambda), ValidationError);
}

TEST(GainModel, WaistForFortyDbi)
{
    const double w0 = waist_for_gain(1e4, lambda);
    EXPECT_NEAR(w0, 0.0450, 5e-5);
    // the gain formula it inverts
    EXPECT_NEAR(4.0 * pi * (pi * w0 * w0 / 2.0) / (lambda * lambda), 1e4, 1e-8);
}

TEST(GainModel, CollimatedAndDivergentLimits)
{
    const ApSpec near{1.0, 1e4, 1e-9};
    const double w0 = waist_for_gain(1e4, lambda);
    EXPECT_NEAR(waist_from_gain(near, k0).waist_at_ris, w0, 1e-12);
    const double zr = pi * w0 * w0 / lambda;
    const ApSpec far{1.0, 1e4, 1e3 * zr};
    EXPECT_NEAR(waist_from_gain(far, k0).waist_at_ris / (w0 * 1e3), 1.0, 1e-6);
    // footprint carries Pt
    const auto b = waist_from_gain(ApSpec{2.0, 1e4, 1.0}, k0);
    const double w = b.waist_at_ris;
    EXPECT_NEAR(pi * w * w * b.amplitude * b.amplitude / (4.0 * free_space_impedance), 2.0, 1e-12);
    EXPECT_THROW(waist_from_gain(ApSpec{1.0, 0.5, 1.0}, k0), ValidationError);
}
