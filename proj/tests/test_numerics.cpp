#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ris_kspace.hpp"

using namespace ris;

namespace {

ComplexField2D random_field(const Grid2D& g, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    return ComplexField2D::generate(g, [&](std::size_t, std::size_t) { return cplx(n(rng), n(rng)); });
}

// direct sum with the library's scaling and centred indexing
Spectrum2D dft_oracle(const ComplexField2D& f)
{
    const Grid2D& g = f.grid();
    Spectrum2D s(g);
    for (std::size_t q = 0; q < g.ny(); ++q)
        for (std::size_t p = 0; p < g.nx(); ++p) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < g.ny(); ++j)
                for (std::size_t i = 0; i < g.nx(); ++i)
                    acc += f(i, j) * std::polar(1.0, -(g.kx(p) * g.x(i) + g.ky(q) * g.y(j)));
            s(p, q) = acc * g.cell_area() / (4.0 * pi * pi);
        }
    return s;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b)
{
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

double max_abs(std::span<const cplx> a)
{
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

// erf(z) = 2z/sqrt(pi) ∫_0^1 exp(-z^2 t^2) dt, composite Gauss-Legendre
cplx erf_quadrature(cplx z)
{
    static std::vector<double> x, w;
    if (x.empty()) gauss_legendre(24, x, w);
    const int panels = 400;
    cplx acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double t = 0.5 * (a + b) + 0.5 * (b - a) * x[k];
            acc += 0.5 * (b - a) * w[k] * std::exp(-z * z * t * t);
        }
    }
    return 2.0 * z / std::sqrt(pi) * acc;
}

}  // namespace

TEST(Grid, CentredAxesAndReciprocalLattice)
{
    const Grid2D g(8, 6, 0.5, 0.25);
    EXPECT_EQ(g.x(4), 0.0);
    EXPECT_EQ(g.y(3), 0.0);
    EXPECT_DOUBLE_EQ(g.x(0), -2.0);
    EXPECT_DOUBLE_EQ(g.dkx(), 2.0 * pi / 4.0);
    EXPECT_DOUBLE_EQ(g.dky(), 2.0 * pi / 1.5);
    EXPECT_DOUBLE_EQ(g.nyquist_kx(), pi / 0.5);
    EXPECT_THROW(Grid2D(7, 6, 1.0, 1.0), ValidationError);
    EXPECT_THROW(Grid2D(8, 6, 0.0, 1.0), ValidationError);
}

TEST(Grid, FftFriendlySizes)
{
    EXPECT_EQ(fft_friendly_size(1000), 1000u);
    EXPECT_EQ(fft_friendly_size(1001), 1008u);
    EXPECT_EQ(fft_friendly_size(22), 24u);
    EXPECT_EQ(fft_friendly_size(1), 2u);
}

TEST(Grid, EmbedAndCropAreInverse)
{
    const Grid2D g(10, 6, 1.0, 1.0);
    const auto f = random_field(g, 3);
    const auto big = embed_centered(f, g.padded(3));
    EXPECT_DOUBLE_EQ(big.norm_sq(), f.norm_sq());
    EXPECT_EQ(big(15, 9), f(5, 3));  // origin stays at the centre index
    const auto back = crop_centered(big, g);
    EXPECT_EQ(max_abs_diff(back.values(), f.values()), 0.0);
}

TEST(Fft, MatchesDirectDftOracle)
{
    for (auto [nx, ny] : {std::pair<std::size_t, std::size_t>{32, 32}, {16, 10}, {6, 20}}) {
        const Grid2D g(nx, ny, 0.3e-3, 0.7e-3);
        const auto f = random_field(g, static_cast<unsigned>(nx * 131 + ny));
        const auto fast = forward_spectrum(f);
        const auto slow = dft_oracle(f);
        EXPECT_LE(max_abs_diff(fast.values(), slow.values()), 1e-10 * max_abs(slow.values())) << nx << "x" << ny;
    }
}

TEST(Fft, ParsevalInLibraryNormalisation)
{
    const Grid2D g(64, 48, 1e-3, 2e-3);
    const auto f = random_field(g, 11);
    const auto s = forward_spectrum(f);
    const double lhs = field_energy(f);
    const double rhs = 4.0 * pi * pi * spectrum_energy(s);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-10);
}

TEST(Fft, RoundTripAndLinearity)
{
    const Grid2D g(40, 24, 1e-3, 1e-3);
    const auto a = random_field(g, 5), b = random_field(g, 6);
    const auto back = inverse_spectrum(forward_spectrum(a), g);
    EXPECT_LE(max_abs_diff(back.values(), a.values()), 1e-12 * max_abs(a.values()));

    const cplx alpha(0.3, -1.2), beta(2.0, 0.5);
    ComplexField2D mix(g);
    for (std::size_t n = 0; n < g.size(); ++n) mix[n] = alpha * a[n] + beta * b[n];
    const auto sm = forward_spectrum(mix), sa = forward_spectrum(a), sb = forward_spectrum(b);
    double worst = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) worst = std::max(worst, std::abs(sm[n] - alpha * sa[n] - beta * sb[n]));
    EXPECT_LE(worst, 1e-12 * max_abs(sm.values()));
}

TEST(Fft, RejectsNonFiniteInput)
{
    const Grid2D g(4, 4, 1.0, 1.0);
    ComplexField2D f(g);
    f[3] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    EXPECT_THROW(forward_spectrum(f), ValidationError);
}

TEST(Fft, ShiftTheoremOnTheLattice)
{
    // multiplying by e^{j m dk x} moves the spectrum by exactly m bins
    const Grid2D g(32, 16, 1e-3, 1e-3);
    const auto f = random_field(g, 9);
    const int m = 5;
    ComplexField2D t(g);
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) t(i, j) = f(i, j) * std::polar(1.0, m * g.dkx() * g.x(i));
    const auto sf = forward_spectrum(f), st = forward_spectrum(t);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) worst = std::max(worst, std::abs(st((i + m) % g.nx(), j) - sf(i, j)));
    EXPECT_LE(worst, 1e-12 * max_abs(sf.values()));
}

TEST(Erf, AgreesWithQuadratureOracle)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int n = 0; n < 300; ++n) {
        const cplx z(u(rng), u(rng));
        const cplx ref = erf_quadrature(z);
        EXPECT_LE(std::abs(complex_erf(z) - ref), 1e-10 * std::max(1.0, std::abs(ref))) << z;
    }
}

TEST(Erf, FrozenHighPrecisionValues)
{
    struct Case {
        cplx z, v;
    };
    // 30-digit reference evaluations
    const Case cases[] = {
        {{0.5, 0.5}, {0.64261291485482052832, 0.45788139443519221584}},
        {{2.0, 1.0}, {1.0036063427256517509, -0.011259006028815025076}},
        {{-1.5, 3.0}, {-118.85590404657550412, -88.120890671506463806}},
        {{3.0, -0.2}, {0.99999299572063099293, -0.000021858108521398730695}},
        {{0.1, 5.0}, {6817477771.5138365059, 4581362884.0523508117}},
        {{4.0, 4.0}, {0.97854923307608192587, 0.097339690630831865347}},
        {{1e-3, 2e-3}, {0.0011283833044904183014, 0.0022567590864395154101}},
    };
    for (const auto& c : cases) EXPECT_LE(std::abs(complex_erf(c.z) - c.v), 1e-12 * std::abs(c.v)) << c.z;
}

TEST(Erf, SymmetriesAndRealAxis)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int n = 0; n < 200; ++n) {
        const cplx z(u(rng), u(rng));
        const cplx e = complex_erf(z);
        EXPECT_LE(std::abs(complex_erf(-z) + e), 1e-14 * std::max(1.0, std::abs(e)));
        EXPECT_LE(std::abs(complex_erf(std::conj(z)) - std::conj(e)), 1e-14 * std::max(1.0, std::abs(e)));
        const double x = u(rng);
        EXPECT_NEAR(complex_erf(cplx(x, 0.0)).real(), std::erf(x), 1e-14);
        EXPECT_EQ(complex_erf(cplx(x, 0.0)).imag(), 0.0);
    }
}

TEST(Erf, ScaledRealPartNeverOverflows)
{
    // e^{-y^2} Re erf(x + jy) against the direct product where that is finite
    for (double x : {0.2, 1.0, 3.0, 8.0})
        for (double y : {0.0, 0.5, 2.0, 5.0}) {
            const cplx z(x, y);
            const double direct = std::exp(-y * y) * complex_erf(z).real();
            EXPECT_NEAR(erf_real_scaled(z), direct, 1e-12 * std::max(1.0, std::abs(direct))) << z;
        }
    const double far = erf_real_scaled(cplx(2.0, 1e3));
    EXPECT_TRUE(std::isfinite(far));
    EXPECT_THROW(complex_erf(cplx(0.0, 40.0)), DomainError);
}

TEST(Io, Cf64RoundTripIsBitExact)
{
    const Grid2D g(6, 4, 1.25e-3, 5e-4);
    const auto f = random_field(g, 21);
    std::stringstream ss;
    io::write_cf64(ss, f, "V/m");
    io::Cf64Header h;
    const auto back = io::read_cf64<FieldTag>(ss, &h);
    EXPECT_EQ(h.nx, 6u);
    EXPECT_EQ(h.units, "V/m");
    EXPECT_TRUE(back.grid() == g);
    for (std::size_t n = 0; n < g.size(); ++n) EXPECT_EQ(back[n], f[n]);
}

TEST(Io, Cf64RejectsKindMismatchAndTruncation)
{
    const Grid2D g(4, 4, 1.0, 1.0);
    std::stringstream a;
    io::write_cf64(a, ComplexField2D(g), "1");
    EXPECT_THROW(io::read_cf64<SpectrumTag>(a), ValidationError);
    std::stringstream b;
    io::write_cf64(b, ComplexField2D(g), "1");
    std::string text = b.str();
    text.resize(text.size() - 5);
    std::stringstream c(text);
    EXPECT_THROW(io::read_cf64<FieldTag>(c), ValidationError);
}

TEST(Parallel, EveryIndexVisitedOnceAndErrorsPropagate)
{
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                     if (i == 7) throw NumericalError("boom");
                 }),
                 NumericalError);
}
