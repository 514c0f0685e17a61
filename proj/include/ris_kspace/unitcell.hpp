#pragma once

// Lorentzian unit cell. With Δ = f^2 − f0^2 the element reflectivity is
//
//   Γ(f0) = 1 − 2 a f / ((a + γ) f + j Δ) = ((γ − a) f + j Δ) / ((γ + a) f + j Δ).
//
// In the detuning variable u = Δ/f this is a Möbius map of the real line, so
// the reachable values lie on the circle |Γ − (1 − a/b)| = a/b, b = a + γ,
// which makes the nearest reachable point to any target available in closed
// form.

#include <algorithm>
#include <cmath>
#include <vector>

#include "core.hpp"

namespace ris {

struct UnitCellModel {
    double gamma_e = 0.05;  // damping, GHz
    double a_e = 0.4;       // resonance strength, GHz
    double f = 150.0;       // operation frequency, GHz

    void validate() const
    {
        require(gamma_e > 0.0 && std::isfinite(gamma_e), "UnitCellModel: gamma_e must be positive");
        require(a_e > 0.0 && std::isfinite(a_e), "UnitCellModel: a_e must be positive");
        require(f > 0.0 && std::isfinite(f), "UnitCellModel: f must be positive");
    }
};

inline cplx gamma_uc(const UnitCellModel& m, double f0)
{
    const double delta = m.f * m.f - f0 * f0;
    return 1.0 - 2.0 * m.a_e * m.f / cplx((m.a_e + m.gamma_e) * m.f, delta);
}

/// |Γ| from its closed form 1 − 4 a γ f² / ((a + γ)² f² + Δ²), square-rooted.
inline double gamma_uc_amplitude(const UnitCellModel& m, double f0)
{
    const double delta = m.f * m.f - f0 * f0;
    const double b = m.a_e + m.gamma_e;
    const double f2 = m.f * m.f;
    return std::sqrt(1.0 - 4.0 * m.a_e * m.gamma_e * f2 / (b * b * f2 + delta * delta));
}

/// arg Γ from its closed form, as the two-argument arctangent of
/// 2 a f Δ over (γ² − a²) f² + Δ².
inline double gamma_uc_phase(const UnitCellModel& m, double f0)
{
    const double delta = m.f * m.f - f0 * f0;
    const double f2 = m.f * m.f;
    return std::atan2(2.0 * m.a_e * m.f * delta, (m.gamma_e * m.gamma_e - m.a_e * m.a_e) * f2 + delta * delta);
}

/// Dense table of the reachable curve, sorted by detuning f − f0: `per_side`
/// log-spaced detunings per sign over [lo, hi]·γe, plus the resonance.
class PhaseTable {
public:
    explicit PhaseTable(const UnitCellModel& m, std::size_t per_side = 2048, double lo = 1e-4, double hi = 1e2)
        : model_(m)
    {
        m.validate();
        require(per_side >= 2 && lo > 0.0 && hi > lo, "PhaseTable: invalid sampling");
        std::vector<double> mags(per_side);
        for (std::size_t n = 0; n < per_side; ++n)
            mags[n] = m.gamma_e * lo * std::pow(hi / lo, static_cast<double>(n) / static_cast<double>(per_side - 1));
        for (std::size_t n = per_side; n-- > 0;) detuning_.push_back(-mags[n]);
        detuning_.push_back(0.0);
        for (double d : mags) detuning_.push_back(d);
        for (double d : detuning_) {
            require(m.f - d > 0.0, "PhaseTable: detuning range drives f0 to zero");
            const cplx g = gamma_uc(m, m.f - d);
            value_.push_back(g);
            phase_.push_back(std::arg(g));
        }
    }

    std::size_t size() const { return detuning_.size(); }
    double detuning(std::size_t n) const { return detuning_[n]; }
    double f0(std::size_t n) const { return model_.f - detuning_[n]; }
    cplx value(std::size_t n) const { return value_[n]; }
    double phase(std::size_t n) const { return phase_[n]; }
    double max_detuning() const { return detuning_.back(); }
    const UnitCellModel& model() const { return model_; }

private:
    UnitCellModel model_;
    std::vector<double> detuning_;
    std::vector<cplx> value_;
    std::vector<double> phase_;
};

namespace detail {

inline double wrap_phase(double p)
{
    p = std::remainder(p, 2.0 * pi);
    return p <= -pi ? p + 2.0 * pi : p;
}

}  // namespace detail

struct UcLookup {
    double f0;        // GHz
    double detuning;  // f − f0, GHz
    cplx gamma;
    bool reachable;   // false when the target phase falls outside the table's phase span
};

/// Table entry whose phase is nearest the target (circular distance); ties go
/// to the smaller |f − f0|.
inline UcLookup uc_lookup(const PhaseTable& table, double phase_target)
{
    require(std::isfinite(phase_target), "uc_lookup: phase must be finite");
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t n = 0; n < table.size(); ++n) {
        const double d = std::abs(detail::wrap_phase(table.phase(n) - phase_target));
        if (d < best_d || (d == best_d && std::abs(table.detuning(n)) < std::abs(table.detuning(best)))) {
            best = n;
            best_d = d;
        }
    }
    // reachable if the target sits between two neighbouring entries (cyclically)
    bool reachable = best_d == 0.0;
    for (std::size_t n = 0; n + 1 < table.size() && !reachable; ++n) {
        const double step = detail::wrap_phase(table.phase(n + 1) - table.phase(n));
        const double a = detail::wrap_phase(phase_target - table.phase(n));
        const double b = detail::wrap_phase(table.phase(n + 1) - phase_target);
        if (a * step >= 0.0 && b * step >= 0.0 && std::abs(a + b - step) < 1e-12) reachable = true;
    }
    return {table.f0(best), table.detuning(best), table.value(best), reachable};
}

inline UcLookup uc_lookup(const UnitCellModel& m, double phase_target)
{
    return uc_lookup(PhaseTable(m), phase_target);
}

/// Closest point of the curve to an arbitrary complex target, with the
/// detuning confined to |f − f0| <= max_detuning.
class CurveProjector {
public:
    CurveProjector(const UnitCellModel& m, double max_detuning) : m_(m)
    {
        m.validate();
        require(max_detuning > 0.0 && max_detuning < m.f, "CurveProjector: detuning bound must lie in (0, f)");
        b_ = m.a_e + m.gamma_e;
        rho_ = m.a_e / b_;
        center_ = 1.0 - rho_;
        u_hi_ = u_of_detuning(max_detuning);
        u_lo_ = u_of_detuning(-max_detuning);
    }

    const UnitCellModel& model() const { return m_; }

    double u_of_detuning(double d) const
    {
        const double f0 = m_.f - d;
        return (m_.f * m_.f - f0 * f0) / m_.f;
    }
    double detuning_of_u(double u) const { return m_.f - std::sqrt(m_.f * m_.f - u * m_.f); }
    cplx gamma_of_u(double u) const { return 1.0 - 2.0 * m_.a_e / cplx(b_, u); }

    /// Detuning f − f0 of the reachable point nearest `target`.
    double project(cplx target) const
    {
        const cplx v = target - center_;
        double u;
        if (std::abs(v) == 0.0) {
            u = 0.0;
        } else {
            // Γ − c = ρ (ju − b)/(ju + b) = ρ e^{jψ}  ⇔  u = b cot(ψ/2)
            const double psi = std::arg(v);
            const double half = psi / 2.0;
            u = std::sin(half) == 0.0 ? 1e300 : b_ * std::cos(half) / std::sin(half);
        }
        if (u > u_hi_ || u < u_lo_) {
            const double dh = std::abs(gamma_of_u(u_hi_) - target);
            const double dl = std::abs(gamma_of_u(u_lo_) - target);
            u = dh <= dl ? u_hi_ : u_lo_;
        }
        return detuning_of_u(u);
    }

private:
    UnitCellModel m_;
    double b_, rho_, center_, u_lo_, u_hi_;
};

}  // namespace ris
