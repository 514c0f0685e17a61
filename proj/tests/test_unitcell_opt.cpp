#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ris_kspace.hpp"

using namespace ris;

namespace {

const double k0 = wavenumber_from_ghz(150.0);
const double lambda = wavelength_from_ghz(150.0);

double max_step(const PhaseTable& t)
{
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < t.size(); ++n) s = std::max(s, std::abs(std::remainder(t.phase(n + 1) - t.phase(n), 2 * pi)));
    return s;
}

struct SmallProblem {
    Grid2D grid;
    OptProblem problem;
};

SmallProblem steer_problem(double a_e, std::uint64_t seed = 1)
{
    const Grid2D g = ris_grid(24, 24, lambda / 2, lambda / 2);
    GaussianBeamSpec b;
    b.waist_at_ris = 6 * lambda;
    b.k0 = k0;
    const auto inc = gaussian_footprint(b, g);
    const auto target = steering_mask({0.0, deg2rad(30.0), k0, 1.0}, RectShape{12 * lambda, 12 * lambda}, g);
    OptSettings s;
    s.seed = seed;
    return {g, OptProblem{inc, target, UnitCellModel{0.05, a_e, 150.0}, k0, s}};
}

double peak_spectrum(const ComplexField2D& gamma, const ComplexField2D& inc)
{
    ComplexField2D f(gamma.grid());
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = gamma[n] * inc[n];
    const auto s = forward_spectrum(f);
    double m = 0.0;
    for (const auto& v : s.values()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST(UnitCell, ClosedFormsAgreeWithTheComplexValue)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uf(100.0, 200.0), ud(-3.0, 3.0);
    const UnitCellModel m0{0.05, 0.4, 150.0};
    double worst_a = 0.0, worst_p = 0.0;
    for (int n = 0; n < 10000; ++n) {
        UnitCellModel m = m0;
        m.f = uf(rng);
        const double f0 = m.f + ud(rng) * (n % 2 ? 0.1 : 2.0);
        const cplx g = gamma_uc(m, f0);
        worst_a = std::max(worst_a, std::abs(std::abs(g) - gamma_uc_amplitude(m, f0)));
        worst_p = std::max(worst_p, std::abs(std::remainder(std::arg(g) - gamma_uc_phase(m, f0), 2 * pi)));
    }
    EXPECT_LE(worst_a, 1e-10);
    EXPECT_LE(worst_p, 1e-10);
}

TEST(UnitCell, OnResonanceValue)
{
    const UnitCellModel m{0.05, 0.4, 150.0};
    const cplx g = gamma_uc(m, 150.0);
    EXPECT_NEAR(g.real(), -7.0 / 9.0, 1e-12);
    EXPECT_NEAR(g.imag(), 0.0, 1e-12);
    EXPECT_NEAR(gamma_uc_amplitude(m, 150.0), 7.0 / 9.0, 1e-12);
    EXPECT_NEAR(std::abs(gamma_uc_phase(m, 150.0)), pi, 1e-12);
}

TEST(UnitCell, OffResonanceAndLosslessLimits)
{
    const UnitCellModel m{0.05, 0.4, 150.0};
    double prev = 1.0;
    for (double d : {1.0, 10.0, 100.0, 1000.0}) {
        const double e = std::abs(gamma_uc(m, 150.0 + d) - 1.0);
        EXPECT_LT(e, prev);
        prev = e;
    }
    // far from resonance |Γ − 1| → 2 a f / |f² − f0²|
    const double delta = 150.0 * 150.0 - 1150.0 * 1150.0;
    EXPECT_NEAR(prev / (2 * 0.4 * 150.0 / std::abs(delta)), 1.0, 1e-6);
    for (double d : {-1.0, -0.01, 0.003, 0.5}) {
        const UnitCellModel lossless{1e-12, 0.4, 150.0};
        EXPECT_NEAR(std::abs(gamma_uc(lossless, 150.0 + d)), 1.0, 1e-9) << d;
    }
}

TEST(UnitCell, PassiveEverywhere)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 20000; ++n) {
        const UnitCellModel m{1e-4 + u(rng), 1e-4 + u(rng), 10.0 + 200.0 * u(rng)};
        const double f0 = m.f * (0.9 + 0.2 * u(rng));
        EXPECT_LE(std::abs(gamma_uc(m, f0)), 1.0 + 1e-15);
        EXPECT_LE(gamma_uc_amplitude(m, f0), 1.0);
    }
    EXPECT_THROW(UnitCellModel({0.0, 0.4, 150.0}).validate(), ValidationError);
    EXPECT_THROW(UnitCellModel({0.05, -0.4, 150.0}).validate(), ValidationError);
}

TEST(PhaseLookup, ResonanceAndRoundTrip)
{
    const UnitCellModel m{0.05, 0.4, 150.0};
    const PhaseTable t(m);
    EXPECT_EQ(t.size(), 4097u);
    const auto res = uc_lookup(t, pi);
    EXPECT_DOUBLE_EQ(res.f0, 150.0);
    EXPECT_TRUE(res.reachable);
    const auto edge = uc_lookup(t, 1e-6);
    EXPECT_GT(std::abs(edge.detuning), 1.0);
    EXPECT_NEAR(std::abs(edge.gamma), 1.0, 1e-2);

    const double step = max_step(t);
    EXPECT_LT(step, 0.02);
    std::size_t unreachable = 0;
    for (int n = 0; n < 1024; ++n) {
        const double phi = -pi + 2 * pi * (n + 1) / 1024.0;
        const auto r = uc_lookup(t, phi);
        const double err = std::abs(std::remainder(std::arg(gamma_uc(m, r.f0)) - phi, 2 * pi));
        if (r.reachable) {
            EXPECT_LE(err, step) << phi;
        } else {
            ++unreachable;
            // the nearest achievable phase sits at an end of the detuning range
            EXPECT_DOUBLE_EQ(std::abs(r.detuning), t.max_detuning()) << phi;
        }
    }
    // the ±100 γe detuning range cannot reach phases right around 0
    EXPECT_GT(unreachable, 0u);
    EXPECT_LT(unreachable, 40u);
}

TEST(Projection, NoTableEntryIsCloser)
{
    for (double a : {0.4, 0.2}) {
        const UnitCellModel m{0.05, a, 150.0};
        const PhaseTable t(m);
        const CurveProjector proj(m, t.max_detuning());
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int n = 0; n < 10; ++n) {
            const cplx target(u(rng), u(rng));
            const double d = proj.project(target);
            EXPECT_LE(std::abs(d), t.max_detuning() * (1 + 1e-12));
            const double got = std::abs(gamma_uc(m, m.f - d) - target);
            double best = 1e300;
            for (std::size_t k = 0; k < t.size(); ++k) best = std::min(best, std::abs(t.value(k) - target));
            EXPECT_LE(got, best + 1e-12) << target;
        }
    }
}

TEST(Optimizer, TraceIsMonotoneAndResultIsOnTheCurve)
{
    const auto [g, p] = steer_problem(0.4);
    const auto r = optimize_mask(p);
    ASSERT_GE(r.trace.size(), 2u);
    for (std::size_t n = 1; n < r.trace.size(); ++n) EXPECT_LE(r.trace[n], r.trace[n - 1] * (1 + 1e-12)) << n;
    EXPECT_LT(r.trace.back(), r.trace.front());
    EXPECT_TRUE(r.mask.passive());
    const auto& sup = p.target.support();
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (sup[n] > 0.0) {
            ASSERT_FALSE(std::isnan(r.detuning.f0[n]));
            EXPECT_LE(std::abs(r.mask.gamma()[n] - sup[n] * gamma_uc(p.model, r.detuning.f0[n])), 1e-15);
        } else {
            EXPECT_TRUE(std::isnan(r.detuning.f0[n]));
            EXPECT_EQ(r.mask.gamma()[n], cplx(0.0));
        }
    }
    EXPECT_NEAR(mask_objective(r.mask.gamma(), p.target.gamma(), p.incident, k0) / r.trace.back(), 1.0, 1e-9);
    // lossy elements cannot beat the ideal mask's spectral peak
    EXPECT_LE(peak_spectrum(r.mask.gamma(), p.incident), peak_spectrum(p.target.gamma(), p.incident) * (1 + 1e-9));
}

TEST(Optimizer, DeterministicForASeed)
{
    const auto a = optimize_mask(steer_problem(0.2, 7).problem);
    const auto b = optimize_mask(steer_problem(0.2, 7).problem);
    EXPECT_EQ(a.trace, b.trace);
    for (std::size_t n = 0; n < a.mask.gamma().size(); ++n) ASSERT_EQ(a.mask.gamma()[n], b.mask.gamma()[n]);
}

TEST(Optimizer, FeasibleTargetIsSolvedAtInitialisation)
{
    const Grid2D g = ris_grid(16, 16, lambda / 2, lambda / 2);
    const UnitCellModel m{0.05, 0.4, 150.0};
    const cplx on_curve = gamma_uc(m, 150.03);
    const auto sup = sample_shape(RectShape{8 * lambda, 8 * lambda}, g);
    const auto gamma = ComplexField2D::generate(g, [&](std::size_t i, std::size_t j) { return sup[g.index(i, j)] * on_curve; });
    const auto inc = ComplexField2D::generate(g, [](std::size_t, std::size_t) { return cplx(1.0); });
    const OptProblem p{inc, RISMask(gamma, sup, "custom"), m, k0, {}};
    const auto r = optimize_mask(p);
    const double scale = peak_spectrum(gamma, inc);
    EXPECT_LE(r.trace.front(), 1e-9 * scale);
    EXPECT_TRUE(r.converged);
}

TEST(Optimizer, LowerResonanceStrengthReflectsLess)
{
    const auto [g, p4] = steer_problem(0.4);
    const auto p2 = steer_problem(0.2).problem;
    const auto r4 = optimize_mask(p4), r2 = optimize_mask(p2);
    auto energy = [&](const RISMask& mk) { return field_energy(apply_mask(mk, p4.incident)); };
    EXPECT_LT(energy(r2.mask), energy(r4.mask));
    EXPECT_LE(energy(r4.mask), energy(p4.target));
}

TEST(Optimizer, CsvWriters)
{
    const Grid2D g(2, 2, 1e-3, 1e-3);
    const UnitCellModel m{0.05, 0.4, 150.0};
    const DetuningMap map{g, {150.0, std::nan(""), 149.9, std::nan("")}};
    std::ostringstream a, b;
    write_detuning_csv(a, map, m);
    write_trace_csv(b, {3.0, 2.0});
    std::string line;
    std::istringstream ia(a.str());
    std::getline(ia, line);
    EXPECT_EQ(line, "ix,iy,f0_GHz,abs_gamma,arg_gamma");
    int rows = 0;
    while (std::getline(ia, line)) ++rows;
    EXPECT_EQ(rows, 2);
    EXPECT_EQ(b.str(), "iteration,objective\n0,3\n1,2\n");
}
