#pragma once

// Fits a realisable mask (every element on the unit-cell curve) to a target
// mask by matching reflected spectra on the propagating k bins.
//
// Each element contributes c_n e^{-j k·x_n} Γ_n to the spectrum, so with the
// other elements frozen the objective is a quadratic in Γ_n whose
// unconstrained minimiser Γ_n + d* is known in closed form; the constrained
// minimiser is the curve point nearest to it. Coordinate descent applies that
// exact element update in a seeded random order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <iomanip>
#include <ostream>
#include <random>
#include <vector>

#include "fft.hpp"
#include "ris.hpp"
#include "unitcell.hpp"

namespace ris {

struct OptSettings {
    std::size_t max_sweeps = 50;
    double rel_tol = 1e-6;
    std::uint64_t seed = 1;
    std::size_t objective_pad = 1;  // k lattice = grid padded by this factor
};

struct OptProblem {
    ComplexField2D incident;
    RISMask target;
    UnitCellModel model;
    double k0;
    OptSettings settings{};
};

/// Per-sample resonance frequencies (GHz); NaN outside the RIS.
struct DetuningMap {
    Grid2D grid;
    std::vector<double> f0;
};

struct OptResult {
    DetuningMap detuning;
    RISMask mask;
    std::vector<double> trace;  // objective after initialisation, then after each sweep
    bool converged = false;
    std::size_t sweeps = 0;
};

namespace detail {

// Spectrum of mask·incident on the objective lattice.
inline Spectrum2D objective_spectrum(const ComplexField2D& gamma, const ComplexField2D& incident, const Grid2D& lattice)
{
    ComplexField2D f(gamma.grid());
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = gamma[n] * incident[n];
    return forward_spectrum(embed_centered(f, lattice));
}

}  // namespace detail

/// ‖Ẽ_r(Γ) − Ẽ_r(Γ_target)‖ over the propagating bins of the objective lattice.
inline double mask_objective(const ComplexField2D& gamma, const ComplexField2D& target, const ComplexField2D& incident,
                             double k0, std::size_t pad = 1)
{
    const Grid2D& g = gamma.grid();
    const Grid2D lat = g.padded(pad);
    auto a = detail::objective_spectrum(gamma, incident, lat);
    auto b = detail::objective_spectrum(target, incident, lat);
    double s = 0.0;
    for (std::size_t j = 0; j < lat.ny(); ++j)
        for (std::size_t i = 0; i < lat.nx(); ++i)
            if (lat.kx(i) * lat.kx(i) + lat.ky(j) * lat.ky(j) <= k0 * k0) s += std::norm(a(i, j) - b(i, j));
    return std::sqrt(s * lat.dkx() * lat.dky());
}

inline OptResult optimize_mask(const OptProblem& p)
{
    p.model.validate();
    const Grid2D& g = p.target.grid();
    require(p.incident.grid() == g, "optimize_mask: incident field and target mask grids differ");
    require(p.k0 > 0.0, "optimize_mask: k0 must be positive");
    require(p.settings.objective_pad >= 1, "optimize_mask: objective_pad must be >= 1");
    require(p.settings.rel_tol >= 0.0, "optimize_mask: rel_tol must be >= 0");

    const PhaseTable table(p.model);
    const CurveProjector proj(p.model, table.max_detuning());
    const auto& support = p.target.support();
    const ComplexField2D& target = p.target.gamma();

    // propagating bins of the objective lattice
    const Grid2D lat = g.padded(p.settings.objective_pad);
    std::vector<std::size_t> bin_i, bin_j;
    for (std::size_t j = 0; j < lat.ny(); ++j)
        for (std::size_t i = 0; i < lat.nx(); ++i)
            if (lat.kx(i) * lat.kx(i) + lat.ky(j) * lat.ky(j) <= p.k0 * p.k0) {
                bin_i.push_back(i);
                bin_j.push_back(j);
            }
    const std::size_t M = bin_i.size();
    require(M > 0, "optimize_mask: no propagating bins on the objective lattice");
    // active k columns / rows
    std::vector<std::size_t> cols, rows;
    for (std::size_t i = 0; i < lat.nx(); ++i)
        if (std::abs(lat.kx(i)) <= p.k0) cols.push_back(i);
    for (std::size_t j = 0; j < lat.ny(); ++j)
        if (std::abs(lat.ky(j)) <= p.k0) rows.push_back(j);

    // elements: support samples; detuning d_n, effective Γ_n = w_n Γ_uc(d_n)
    std::vector<std::size_t> elems;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (support[n] > 0.0) elems.push_back(n);
    require(!elems.empty(), "optimize_mask: target mask has empty support");

    std::vector<double> det(g.size(), std::numeric_limits<double>::quiet_NaN());
    ComplexField2D gamma(g);
    for (std::size_t n : elems) {
        det[n] = proj.project(target[n] / support[n]);
        gamma[n] = support[n] * gamma_uc(p.model, p.model.f - det[n]);
    }

    const double scale = g.cell_area() / (4.0 * pi * pi);
    const double dkk = lat.dkx() * lat.dky();
    const Spectrum2D goal = detail::objective_spectrum(target, p.incident, lat);

    // D = Ẽ(Γ) − Ẽ(target) restricted to the propagating bins
    std::vector<cplx> D(M);
    auto refresh = [&] {
        const Spectrum2D cur = detail::objective_spectrum(gamma, p.incident, lat);
        double s = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            D[m] = cur(bin_i[m], bin_j[m]) - goal(bin_i[m], bin_j[m]);
            s += std::norm(D[m]);
        }
        return s;
    };
    double J = refresh();

    OptResult out{DetuningMap{g, {}}, RISMask(gamma, support, "optimize"), {}, false, 0};
    out.trace.push_back(std::sqrt(J * dkk));

    // e^{-j kx x_i} over active columns, e^{-j ky y_j} over active rows
    std::vector<cplx> ex(cols.size()), ey(rows.size());
    std::vector<std::size_t> col_of(lat.nx(), 0), row_of(lat.ny(), 0);
    for (std::size_t c = 0; c < cols.size(); ++c) col_of[cols[c]] = c;
    for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
    std::vector<std::size_t> bin_c(M), bin_r(M);
    for (std::size_t m = 0; m < M; ++m) {
        bin_c[m] = col_of[bin_i[m]];
        bin_r[m] = row_of[bin_j[m]];
    }

    std::mt19937_64 rng(p.settings.seed);
    std::vector<std::size_t> order = elems;
    for (std::size_t sweep = 0; sweep < p.settings.max_sweeps && J > 0.0; ++sweep) {
        std::shuffle(order.begin(), order.end(), rng);
        const double J_start = J;
        for (std::size_t n : order) {
            const std::size_t ix = n % g.nx(), iy = n / g.nx();
            const cplx c = p.incident[n] * scale;
            if (std::norm(c) == 0.0) continue;
            const double x = g.x(ix), y = g.y(iy);
            for (std::size_t q = 0; q < cols.size(); ++q) ex[q] = std::polar(1.0, -lat.kx(cols[q]) * x);
            for (std::size_t q = 0; q < rows.size(); ++q) ey[q] = std::polar(1.0, -lat.ky(rows[q]) * y);
            cplx h = 0.0;
            for (std::size_t m = 0; m < M; ++m) h += std::conj(ex[bin_c[m]] * ey[bin_r[m]]) * D[m];
            const double cm = std::norm(c) * static_cast<double>(M);
            const cplx step = -std::conj(c) * h / cm;  // optimal change of the effective Γ_n
            const cplx g_old = gamma[n];
            const double d_new = proj.project((g_old + step) / support[n]);
            const cplx g_new = support[n] * gamma_uc(p.model, p.model.f - d_new);
            const cplx d = g_new - g_old;
            // J(Γ + d) − J(Γ) = cm (|d − step|^2 − |step|^2)
            const double dJ = cm * (std::norm(d - step) - std::norm(step));
            if (!(dJ < -1e-12 * J)) continue;
            det[n] = d_new;
            gamma[n] = g_new;
            const cplx dc = d * c;
            for (std::size_t m = 0; m < M; ++m) D[m] += dc * ex[bin_c[m]] * ey[bin_r[m]];
            J += dJ;
        }
        J = refresh();  // drop the rounding accumulated by the incremental updates
        out.trace.push_back(std::sqrt(J * dkk));
        out.sweeps = sweep + 1;
        if (J_start - J <= p.settings.rel_tol * J_start) {
            out.converged = true;
            break;
        }
    }
    if (J == 0.0) out.converged = true;

    out.detuning.f0.assign(g.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t n : elems) out.detuning.f0[n] = p.model.f - det[n];
    out.mask = RISMask(std::move(gamma), support, "optimize");
    return out;
}

/// (ix, iy, f0_GHz, |Γ|, arg Γ) for every element.
inline void write_detuning_csv(std::ostream& os, const DetuningMap& map, const UnitCellModel& m)
{
    const Grid2D& g = map.grid;
    os << "ix,iy,f0_GHz,abs_gamma,arg_gamma\n" << std::setprecision(17);
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double f0 = map.f0[g.index(i, j)];
            if (std::isnan(f0)) continue;
            const cplx v = gamma_uc(m, f0);
            os << i << ',' << j << ',' << f0 << ',' << std::abs(v) << ',' << std::arg(v) << '\n';
        }
}

inline void write_trace_csv(std::ostream& os, const std::vector<double>& trace)
{
    os << "iteration,objective\n" << std::setprecision(17);
    for (std::size_t n = 0; n < trace.size(); ++n) os << n << ',' << trace[n] << '\n';
}

}  // namespace ris
