#pragma once

// Complex error function via the Faddeeva function w(z) = e^{-z^2} erfc(-iz).
//
//   |z| small      : Maclaurin series of erf.
//   |z| < 8        : Weideman's rational approximation (N = 40 terms).
//   |z| >= 8       : Laplace continued fraction.
//
// Everything is evaluated in the closed first quadrant; the remaining
// quadrants follow from erf(-z) = -erf(z) and erf(conj z) = conj erf(z),
// which therefore hold exactly.

#include <array>
#include <cmath>
#include <sstream>

#include "core.hpp"

namespace ris {

namespace detail {

inline constexpr int weideman_terms = 40;

struct WeidemanTable {
    double L;
    std::array<double, weideman_terms + 1> a;  // a[1..N] used
};

inline const WeidemanTable& weideman_table()
{
    static const WeidemanTable table = [] {
        constexpr int N = weideman_terms;
        constexpr int M = 2 * N;
        constexpr int M2 = 2 * M;
        WeidemanTable t{};
        t.L = std::sqrt(N / std::sqrt(2.0));
        std::array<double, M2> f{};
        // f[0] = 0, then samples for k = -M+1 .. M-1
        for (int k = -M + 1; k <= M - 1; ++k) {
            const double theta = k * pi / M;
            const double s = t.L * std::tan(theta / 2.0);
            f[static_cast<std::size_t>(k + M)] = std::exp(-s * s) * (t.L * t.L + s * s);
        }
        // real(fft(fftshift(f))) / M2
        for (int n = 1; n <= N; ++n) {
            double acc = 0.0;
            for (int i = 0; i < M2; ++i) {
                const double g = f[static_cast<std::size_t>((i + M) % M2)];
                acc += g * std::cos(2.0 * pi * static_cast<double>(i) * n / M2);
            }
            t.a[static_cast<std::size_t>(n)] = acc / M2;
        }
        return t;
    }();
    return table;
}

inline cplx faddeeva_weideman(cplx z)
{
    const auto& t = weideman_table();
    const cplx iz{-z.imag(), z.real()};
    const cplx den = t.L - iz;
    const cplx Z = (t.L + iz) / den;
    cplx p = t.a[weideman_terms];
    for (int m = weideman_terms - 1; m >= 1; --m) p = p * Z + t.a[static_cast<std::size_t>(m)];
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(pi)) / den;
}

inline cplx faddeeva_continued_fraction(cplx z)
{
    cplx r = 0.0;
    for (int k = 48; k >= 1; --k) r = (0.5 * k) / (z - r);
    return cplx(0.0, 1.0 / std::sqrt(pi)) / (z - r);
}

inline cplx erf_series(cplx z)
{
    const cplx z2 = z * z;
    cplx term = z;
    cplx sum = z;
    for (int n = 1; n < 200; ++n) {
        term *= -z2 / static_cast<double>(n);
        const cplx add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum * (2.0 / std::sqrt(pi));
}

// erf for Re z >= 0, Im z >= 0.
inline cplx erf_first_quadrant(cplx z);

inline constexpr double erf_series_radius = 1.0;

}  // namespace detail

/// Faddeeva function w(z) = e^{-z^2} erfc(-iz) for any finite z.
inline cplx faddeeva(cplx z)
{
    if (z.imag() < 0.0) {
        // w(z) = 2 e^{-z^2} - w(-z)
        return 2.0 * std::exp(-z * z) - faddeeva(-z);
    }
    return std::abs(z) < 8.0 ? detail::faddeeva_weideman(z) : detail::faddeeva_continued_fraction(z);
}

inline cplx detail::erf_first_quadrant(cplx z)
{
    if (std::abs(z) <= erf_series_radius) return erf_series(z);
    const cplx iz{-z.imag(), z.real()};
    return 1.0 - std::exp(-z * z) * faddeeva(iz);
}

/// Largest |Im z| accepted by complex_erf.
inline constexpr double erf_max_imag = 30.0;

/// erf(z) for complex z with |Im z| <= 30. Throws DomainError outside that
/// strip or where |erf z| would overflow a double.
inline cplx complex_erf(cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("complex_erf: non-finite argument");
    if (std::abs(z.imag()) > erf_max_imag || z.imag() * z.imag() - z.real() * z.real() > 700.0) {
        std::ostringstream os;
        os.precision(17);
        os << "complex_erf: argument (" << z.real() << ", " << z.imag()
           << ") outside supported domain (|Im z| <= 30 and Im^2 - Re^2 <= 700)";
        throw DomainError(os.str());
    }
    const bool neg_re = z.real() < 0.0;
    const bool neg_im = z.imag() < 0.0;
    cplx q{std::abs(z.real()), std::abs(z.imag())};
    cplx r = detail::erf_first_quadrant(q);
    // erf is odd and commutes with conjugation; q = z, conj z, -conj z or -z
    if (neg_re != neg_im) r = std::conj(r);
    if (neg_re) r = -r;
    return r;
}

/// e^{-(Im q)^2} · Re erf(q) without intermediate overflow, for any finite q.
/// This is the combination in which the boundary window appears next to the
/// Gaussian spectrum, where Re erf(q) alone can exceed the double range.
inline double erf_real_scaled(cplx q)
{
    const double sign = q.real() < 0.0 ? -1.0 : 1.0;
    const double x = std::abs(q.real());
    const double y = std::abs(q.imag());
    const cplx z{x, y};
    double value;
    if (std::abs(z) <= detail::erf_series_radius) {
        value = std::exp(-y * y) * detail::erf_series(z).real();
    } else {
        // e^{-y^2} erf(z) = e^{-y^2} - e^{-x^2} e^{-2ixy} w(iz),  Im(iz) = x >= 0
        const cplx iz{-y, x};
        const cplx rot = std::polar(std::exp(-x * x), -2.0 * x * y);
        value = std::exp(-y * y) - (rot * faddeeva(iz)).real();
    }
    return sign * value;
}

}  // namespace ris
