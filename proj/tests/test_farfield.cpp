#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ris_kspace.hpp"

using namespace ris;

namespace {

const double k0 = wavenumber_from_ghz(150.0);
const double lambda = wavelength_from_ghz(150.0);

GaussianBeamSpec beam(double w, double theta_i, double amp = 1.0)
{
    GaussianBeamSpec b;
    b.amplitude = amp;
    b.waist_at_ris = w;
    b.theta_i = theta_i;
    b.k0 = k0;
    return b;
}

}  // namespace

TEST(ThetaFactor, DocumentedValuesAndSymmetry)
{
    EXPECT_DOUBLE_EQ(theta_factor(0.0, 0.0, 0.0), 4.0);
    EXPECT_NEAR(theta_factor(pi / 2, 0.0, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(theta_factor(deg2rad(30.0), pi / 2, deg2rad(30.0)), 3.0625, 1e-14);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        const double th = u(rng) * pi / 2, ph = u(rng) * 2 * pi, tr = (u(rng) - 0.5) * pi;
        EXPECT_NEAR(theta_factor(th, ph, tr), theta_factor(th, pi - ph, tr), 1e-13);
    }
}

TEST(BoundaryWindow, IsReal)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double w : {0.002, 0.005}) {
        for (double L : {0.01, 0.05}) {
            const auto spec = analytic_reflected_spectrum(beam(w, deg2rad(30.0)), L, 0.7 * L, deg2rad(-20.0));
            for (int n = 0; n < 300; ++n) {
                const double kx = k0 * u(rng), ky = k0 * u(rng) * std::sqrt(1 - (kx / k0) * (kx / k0));
                const cplx r = spec.window(kx, ky);
                EXPECT_LE(std::abs(r.imag()), 1e-12 * std::max(1.0, std::abs(r))) << kx << ' ' << ky;
            }
        }
    }
}

TEST(BoundaryWindow, ApproachesOneForALargeRis)
{
    // |Im q| stays below Re q = 5 across the band when k0 w <= 2 pi
    const double w = lambda;
    const auto spec = analytic_reflected_spectrum(beam(w, 0.0), 10 * w, 10 * w, 0.0);
    double worst = 0.0;
    for (int a = -40; a <= 40; ++a)
        for (int b = -40; b <= 40; ++b) {
            const double kx = k0 * a / 40.0, ky = k0 * b / 40.0;
            if (kx * kx + ky * ky > k0 * k0) continue;
            worst = std::max(worst, std::abs(spec.window(kx, ky) - 1.0));
        }
    EXPECT_LE(worst, 1e-6);
}

TEST(BoundaryWindow, LargeRisLeavesTheShiftedGaussian)
{
    // wider beams: compare the windowed spectrum against the bare Gaussian relative to its peak
    const auto b = beam(0.01, deg2rad(45.0), 2.0);
    const double tr = deg2rad(10.0);
    const auto spec = analytic_reflected_spectrum(b, 10 * 0.01 / std::cos(b.theta_i), 0.1, tr);
    const auto inc = gaussian_spectrum(b);
    const double shift = k0 * std::sin(b.theta_i) - k0 * std::sin(tr);
    const double peak = std::abs(inc(k0 * std::sin(b.theta_i), 0.0));
    double worst = 0.0;
    for (int a = -60; a <= 60; ++a)
        for (int c = -60; c <= 60; ++c) {
            const double kx = k0 * a / 60.0, ky = k0 * c / 60.0;
            if (kx * kx + ky * ky > k0 * k0) continue;
            worst = std::max(worst, std::abs(spec(kx, ky) - inc(kx + shift, ky)));
        }
    EXPECT_LE(worst, 1e-6 * peak);
}

TEST(AnalyticSpectrum, SincLimitForUniformIllumination)
{
    const double Lx = 0.02, Ly = 0.03, tr = deg2rad(25.0);
    const auto spec = analytic_reflected_spectrum(beam(10 * Ly, 0.0), Lx, Ly, tr);
    const double kr = k0 * std::sin(tr);
    const double peak = std::abs(spec(kr, 0.0));
    double worst = 0.0;
    for (int n = -200; n <= 200; ++n) {
        const double dk = 2 * pi / Lx * n / 200.0;  // main lobe: first nulls at ±2π/Lx
        const double u = Lx * dk / 2;
        const double sinc = u == 0 ? 1.0 : std::sin(u) / u;
        worst = std::max(worst, std::abs(std::abs(spec(kr + dk, 0.0)) / peak - std::abs(sinc)));
    }
    EXPECT_LE(worst, 0.01);
}

TEST(ReceivedPower, InverseSquareAndFraunhoferBound)
{
    EXPECT_NEAR(fraunhofer_distance(0.5, 0.5, lambda), 250.0, 0.5);
    const auto spec = analytic_reflected_spectrum(beam(0.05, deg2rad(45.0)), 0.5, 0.5, 0.0);
    const auto o1 = observation_in_plane(300.0, deg2rad(2.0), 0.0, 1e-4);
    const auto o2 = observation_in_plane(600.0, deg2rad(2.0), 0.0, 1e-4);
    EXPECT_NEAR(received_power_analytic(o1, spec) / received_power_analytic(o2, spec), 4.0, 1e-12);
    EXPECT_THROW(received_power_analytic(observation_in_plane(100.0, 0.0, 0.0, 1e-4), spec), ValidationError);
    try {
        received_power_analytic(observation_in_plane(100.0, 0.0, 0.0, 1e-4), spec);
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("Fraunhofer"), std::string::npos);
    }
    EXPECT_THROW(observation_in_plane(-1.0, 0.0, 0.0, 1.0), ValidationError);
    EXPECT_THROW(observation_in_plane(1.0, 0.0, 0.0, 0.0), ValidationError);
}

TEST(ReceivedPower, MirrorSymmetry)
{
    const double r = 50.0, area = 2e-4;
    for (double ti : {0.0, 20.0, 45.0})
        for (double tr : {-30.0, 0.0, 15.0}) {
            const auto a = analytic_reflected_spectrum(beam(0.02, deg2rad(ti)), 0.06, 0.04, deg2rad(tr));
            const auto m = analytic_reflected_spectrum(beam(0.02, deg2rad(-ti)), 0.06, 0.04, deg2rad(-tr));
            for (double th = -60.0; th <= 60.0; th += 7.5) {
                const double p = received_power_analytic(observation_in_plane(r, deg2rad(th), 0.0, area), a);
                const double q = received_power_analytic(observation_in_plane(r, deg2rad(-th), 0.0, area), m);
                EXPECT_NEAR(p, q, 1e-12 * std::max(p, 1e-300)) << ti << ' ' << tr << ' ' << th;
            }
        }
}

TEST(NumericFarField, MatchesAnalyticPatternForPartialIllumination)
{
    // 100 x 100 elements at λ/5, w = 1 cm at 45° onto θr = 0
    const double pitch = lambda / 5;
    const Grid2D g = ris_grid(100, 100, pitch, pitch);
    const double L = 100 * pitch;
    const auto b = beam(0.01, deg2rad(45.0));
    const auto refl = apply_mask(steering_mask({b.theta_i, 0.0, k0, 1.0}, RectShape{L, L}, g), gaussian_footprint(b, g));
    const NumericFarField nff(refl, k0);
    const auto spec = analytic_reflected_spectrum(b, L, L, 0.0);
    const double r = 5.0, area = 1e-4;
    double num = 0.0, den = 0.0;
    for (double th = -10.0; th <= 10.0; th += 0.1) {
        const auto o = observation_in_plane(r, deg2rad(th), 0.0, area);
        const double pa = received_power_analytic(o, spec), pn = nff.received_power(o, 0.0);
        num += (pa - pn) * (pa - pn);
        den += pa * pa;
    }
    EXPECT_LE(std::sqrt(num / den), 0.02);
}

TEST(NumericFarField, UniformApertureGivesSincSquared)
{
    const double pitch = lambda / 4;
    const Grid2D g = ris_grid(64, 64, pitch, pitch);
    const double L = 64 * pitch, tr = deg2rad(20.0);
    const auto plane = ComplexField2D::generate(g, [](std::size_t, std::size_t) { return cplx(1.0); });
    const auto refl = apply_mask(steering_mask({0.0, tr, k0, 1.0}, RectShape{L, L}, g), plane);
    const NumericFarField nff(refl, k0, 8);
    const auto p = pattern_sweep([&](double th) { return nff.received_power(observation_in_plane(1.0, th, 0.0, 1.0), tr, false); },
                                 deg2rad(-30.0), deg2rad(60.0), 901);
    EXPECT_NEAR(p.theta[p.argmax()], tr, p.step());
    // first nulls at sin θ = sin θr ± λ/L
    for (double s : {-1.0, 1.0}) {
        const double null = std::asin(std::sin(tr) + s * lambda / L);
        const std::size_t n = peak_index_near(p, null, 4 * p.step());  // just a sample index inside the window
        double lo = p.power[n];
        std::size_t at = n;
        for (std::size_t m = 0; m < p.theta.size(); ++m)
            if (std::abs(p.theta[m] - null) <= 4 * p.step() && p.power[m] < lo) {
                lo = p.power[m];
                at = m;
            }
        EXPECT_NEAR(p.theta[at], null, 1.5 * p.step());
        EXPECT_LT(lo, 1e-3 * p.max_power());
    }
}

TEST(NumericFarField, ZeroFieldAndBandChecks)
{
    const Grid2D g(32, 32, lambda / 4, lambda / 4);
    const NumericFarField nff(ComplexField2D(g), k0, 2);
    const auto p = pattern_sweep([&](double th) { return nff.received_power(observation_in_plane(10.0, th, 0.0, 1.0), 0.0); },
                                 deg2rad(-60.0), deg2rad(60.0), 121);
    for (double v : p.power) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(nff.spectrum_at(1.01 * k0, 0.0), ValidationError);
    EXPECT_THROW(pattern_sweep([](double) { return -1.0; }, 0.0, 0.1, 3), NumericalError);
    EXPECT_THROW(pattern_sweep([](double) { return 1.0; }, 0.1, 0.0, 3), ValidationError);
}

TEST(Pattern, CsvAndLobeHelpers)
{
    FarFieldPattern p;
    p.theta = {-0.2, -0.1, 0.0, 0.1, 0.2, 0.3};
    p.power = {0.0, 2.0, 1.0, 4.0, 0.5, 0.01};
    EXPECT_EQ(p.argmax(), 3u);
    EXPECT_EQ(find_lobes(p, 0.1), (std::vector<std::size_t>{1, 3}));
    EXPECT_EQ(peak_index_near(p, -0.1, 0.11), 1u);
    std::ostringstream os;
    write_pattern_csv(os, p);
    const std::string s = os.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "theta_deg,P_r_W,P_r_dB");
    EXPECT_NE(s.find("-inf"), std::string::npos);
}

TEST(LobeAccounting, WindowsSplitTheBandAtMidpoints)
{
    const auto w = lobe_windows(k0, {0.0, deg2rad(30.0), deg2rad(90.0 - 1e-9)});
    ASSERT_EQ(w.size(), 3u);
    EXPECT_DOUBLE_EQ(w[0].first, -k0);
    EXPECT_NEAR(w[0].second, 0.25 * k0, 1e-9);
    EXPECT_NEAR(w[1].first, 0.25 * k0, 1e-9);
    EXPECT_NEAR(w[1].second, 0.75 * k0, 1e-6);
    EXPECT_DOUBLE_EQ(w[2].second, k0);
    EXPECT_THROW(lobe_windows(k0, {0.3, 0.1}), ValidationError);

    // energies add up to the propagating band energy
    const Grid2D g(64, 64, lambda / 4, lambda / 4);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    const auto s = forward_spectrum(ComplexField2D::generate(g, [&](std::size_t, std::size_t) { return cplx(n(rng), n(rng)); }));
    const std::vector<double> angles{deg2rad(-40.0), 0.0, deg2rad(35.0)};
    const auto e = lobe_energies(s, k0, angles);
    EXPECT_NEAR(e[0] + e[1] + e[2], band_power(s, k0, -2 * k0, 2 * k0), 1e-9 * band_power(s, k0, -2 * k0, 2 * k0));
    const auto pw = lobe_powers(s, k0, angles);
    for (double v : pw) EXPECT_GT(v, 0.0);
}
