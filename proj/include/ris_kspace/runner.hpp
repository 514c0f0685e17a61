#pragma once

// Executes a scenario: builds the incident field and the RIS operation,
// evaluates the requested observation, writes the artifacts and returns the
// headline numbers that also go to summary.json.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "farfield.hpp"
#include "io.hpp"
#include "optimize.hpp"
#include "propagation.hpp"
#include "scenario.hpp"

namespace ris {

struct RunOptions {
    std::string subcommand;  // empty: run whatever the scenario describes
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> pad;
};

inline std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string scenario_hash(const Scenario& s) { return fnv1a_hex(s.source.dump()); }

namespace detail {

inline double db(double ratio) { return ratio > 0.0 ? 10.0 * std::log10(ratio) : -std::numeric_limits<double>::infinity(); }

// json has no infinities; store them as null like NaN
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Sweep index range [lo, hi] covering the main lobe and the first sidelobe
/// on each side: out from the peak to the first minimum, then on to the
/// second minimum (or the end of the sweep).
inline std::pair<std::size_t, std::size_t> main_and_first_sidelobes(const std::vector<double>& p)
{
    const std::size_t pk = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    auto walk_down_up_down = [&](int dir) {
        std::size_t n = pk;
        auto next_ok = [&](std::size_t i) { return dir > 0 ? i + 1 < p.size() : i > 0; };
        auto nx = [&](std::size_t i) { return dir > 0 ? i + 1 : i - 1; };
        while (next_ok(n) && p[nx(n)] <= p[n]) n = nx(n);  // first minimum
        while (next_ok(n) && p[nx(n)] >= p[n]) n = nx(n);  // sidelobe peak
        while (next_ok(n) && p[nx(n)] <= p[n]) n = nx(n);  // second minimum
        return n;
    };
    return {walk_down_up_down(-1), walk_down_up_down(+1)};
}

inline double relative_l2(const std::vector<double>& ref, const std::vector<double>& other, std::size_t lo,
                          std::size_t hi)
{
    double num = 0.0, den = 0.0;
    for (std::size_t n = lo; n <= hi; ++n) {
        num += (other[n] - ref[n]) * (other[n] - ref[n]);
        den += ref[n] * ref[n];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::numeric_limits<double>::infinity();
}

/// |Ẽ| along kx on the ky row through `row`.
inline void write_kx_cut(const std::filesystem::path& path, const std::vector<const Spectrum2D*>& cols,
                         const std::vector<std::string>& names, std::size_t row, double k0)
{
    io::write_atomically(path, [&](std::ostream& os) {
        os << "kx_over_k0";
        for (const auto& n : names) os << ",abs_" << n;
        os << '\n' << std::setprecision(17);
        const Grid2D& g = cols.front()->grid();
        for (std::size_t i = 0; i < g.nx(); ++i) {
            os << g.kx(i) / k0;
            for (const auto* s : cols) os << ',' << std::abs((*s)(i, row));
            os << '\n';
        }
    });
}

// peak over the whole lattice and the strongest sidelobe on its ky row
inline json spectrum_summary(const Spectrum2D& s, double k0)
{
    const Grid2D& g = s.grid();
    std::size_t best = 0;
    for (std::size_t n = 1; n < s.size(); ++n)
        if (std::abs(s[n]) > std::abs(s[best])) best = n;
    const std::size_t pi_ = best % g.nx(), pj = best / g.nx();
    const double peak = std::abs(s[best]);
    std::size_t l = pi_, r = pi_;
    while (l > 0 && std::abs(s(l - 1, pj)) < std::abs(s(l, pj))) --l;
    while (r + 1 < g.nx() && std::abs(s(r + 1, pj)) < std::abs(s(r, pj))) ++r;
    double side = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i)
        if (i < l || i > r) side = std::max(side, std::abs(s(i, pj)));
    json j;
    j["peak_abs"] = peak;
    j["peak_kx_over_k0"] = g.kx(pi_) / k0;
    j["peak_ky_over_k0"] = g.ky(pj) / k0;
    j["first_null_left_kx_over_k0"] = g.kx(l) / k0;
    j["first_null_right_kx_over_k0"] = g.kx(r) / k0;
    j["peak_sidelobe_db"] = num(peak > 0.0 ? 20.0 * std::log10(side / peak) : 0.0);
    j["propagating_energy"] = band_power(s, k0, -k0, k0 * (1.0 + 1e-12));
    j["total_energy"] = spectrum_energy(s);
    j["dk"] = g.dkx();
    return j;
}

inline std::size_t override_pad(std::size_t pad, const RunOptions& o) { return o.pad ? *o.pad : pad; }

}  // namespace detail

/// Checks that a subcommand may run the scenario; returns the reason when it may not.
inline std::optional<std::string> subcommand_mismatch(const std::string& sub, const Scenario& s)
{
    if (sub.empty()) return std::nullopt;
    if (auto k = operation_from_string(sub)) {
        if (*k != s.operation_kind())
            return "subcommand '" + sub + "' does not match the scenario operation '" + to_string(s.operation_kind()) + "'";
        return std::nullopt;
    }
    if (sub == "farfield") {
        if (!std::holds_alternative<SweepObs>(s.observation)) return "subcommand 'farfield' needs a sweep observation";
        return std::nullopt;
    }
    if (sub == "propagate") {
        if (!std::holds_alternative<PlanesObs>(s.observation) && !std::holds_alternative<OnAxisObs>(s.observation))
            return "subcommand 'propagate' needs a planes or on_axis observation";
        return std::nullopt;
    }
    return "unknown subcommand '" + sub + "'";
}

/// Runs the scenario; writes artifacts when an output directory is given and
/// returns the summary document.
inline json run_scenario(const Scenario& s, const RunOptions& opt = {})
{
    namespace fs = std::filesystem;
    if (auto why = subcommand_mismatch(opt.subcommand, s)) throw ValidationError(*why);
    const bool write = opt.out_dir.has_value();
    const fs::path out = write ? *opt.out_dir : fs::path{};
    if (write) fs::create_directories(out);

    const double k0 = s.k0();
    const double lambda = s.wavelength();
    const Grid2D g = s.grid.grid();
    if (!g.resolves(k0) && !std::holds_alternative<SpectrumObs>(s.observation))
        throw ValidationError("grid pitch " + std::to_string(g.dx()) + " m does not resolve k0 (need <= lambda/2); use a finer pitch");
    const ShapeMask shape = make_shape(s);
    const ComplexField2D incident = make_incident(s, g);
    const double th_i = s.design_theta_i;

    json sum;
    sum["schema"] = scenario_schema;
    sum["scenario"] = s.name;
    sum["scenario_hash"] = scenario_hash(s);
    sum["subcommand"] = opt.subcommand.empty() ? to_string(s.operation_kind()) : opt.subcommand;
    sum["operation"] = to_string(s.operation_kind());
    sum["frequency_ghz"] = s.frequency_ghz;
    sum["wavelength_m"] = lambda;
    sum["grid"] = {{"nx", g.nx()}, {"ny", g.ny()}, {"dx_m", g.dx()}, {"dy_m", g.dy()}};
    sum["ris_size_m"] = {s.grid.ris_x(), s.grid.ris_y()};
    sum["fraunhofer_distance_m"] = fraunhofer_distance(s.grid.ris_x(), s.grid.ris_y(), lambda);
    if (s.beam.kind == "gaussian" || s.beam.kind == "ap")
        sum["beam"] = {{"waist_at_ris_m", s.beam.gaussian.waist_at_ris}, {"amplitude_v_per_m", s.beam.gaussian.amplitude}};

    // ---- RIS operation
    std::optional<RISMask> mask;
    std::optional<RISMask> theory;  // optimize: the unconstrained target
    ComplexField2D reflected(g);
    double theta_r_for_obs = 0.0;
    std::vector<double> multibeam_angles;
    double shift_k = 0.0;  // k_r − k_i imposed on every incident component
    bool has_shift = false;

    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, SteerOp>) {
                mask = steering_mask({th_i, op.theta_r, k0, op.gamma0}, shape, g);
                reflected = apply_mask(*mask, incident);
                theta_r_for_obs = op.theta_r;
                shift_k = k0 * (std::sin(op.theta_r) - std::sin(th_i));
                has_shift = true;
            } else if constexpr (std::is_same_v<T, MultibeamOp>) {
                MultiBeamSpec spec{op.beams, th_i, k0, op.gamma0};
                mask = multibeam_mask(spec, shape, g, op.uniform ? nullptr : &incident);
                reflected = apply_mask(*mask, incident);
                for (const auto& b : op.beams) multibeam_angles.push_back(b.theta_r);
            } else if constexpr (std::is_same_v<T, BandpassOp>) {
                FilterSpec f{k0 * std::sin(op.theta_pass), op.k_width_k0 * k0, k0 * std::sin(op.theta_r), op.gamma0};
                reflected = bandpass_reflect(f, incident, &shape);
                theta_r_for_obs = op.theta_r;
                shift_k = f.k_steer - f.k_pass;
                has_shift = true;
                sum["filter"] = {{"k_pass_over_k0", std::sin(op.theta_pass)}, {"k_width_over_k0", op.k_width_k0}};
            } else if constexpr (std::is_same_v<T, WavefrontOp>) {
                mask = wavefront_mask(make_wavefront(op, k0, th_i), shape, g);
                reflected = apply_mask(*mask, incident);
                sum["wavefront"] = {{"preset", op.preset}};
            } else {
                theory = steering_mask({th_i, op.theta_r, k0, 1.0}, shape, g);
                UnitCellModel m = op.model;
                m.f = s.frequency_ghz;
                OptProblem prob{incident, *theory, m, k0, {}};
                prob.settings.max_sweeps = op.max_sweeps;
                prob.settings.rel_tol = op.rel_tol;
                prob.settings.seed = opt.seed ? *opt.seed : s.seed;
                OptResult res = optimize_mask(prob);
                mask = res.mask;
                reflected = apply_mask(*mask, incident);
                theta_r_for_obs = op.theta_r;
                bool monotone = true;
                for (std::size_t n = 1; n < res.trace.size(); ++n) monotone = monotone && res.trace[n] <= res.trace[n - 1];
                sum["optimize"] = {{"objective_initial", res.trace.front()}, {"objective_final", res.trace.back()},
                                   {"sweeps", res.sweeps},           {"converged", res.converged},
                                   {"trace_monotone", monotone},     {"seed", prob.settings.seed},
                                   {"a_e_ghz", m.a_e},               {"gamma_e_ghz", m.gamma_e}};
                if (write) {
                    io::write_atomically(out / "detuning.csv", [&](std::ostream& os) { write_detuning_csv(os, res.detuning, m); });
                    io::write_atomically(out / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, res.trace); });
                }
            }
        },
        s.operation);

    if (mask) {
        sum["mask"] = {{"peak_magnitude", mask->peak_magnitude()}, {"passive", mask->passive()}};
        if (write) {
            io::write_cf64(out / "mask.cf64", mask->gamma(), "1");
            io::write_atomically(out / "mask.csv", [&](std::ostream& os) { write_mask_csv(os, *mask); });
        }
    }
    const std::vector<double> support = sample_shape(shape, g);
    const double p_in = power_on_ris(incident, support);
    const double p_out = field_energy(reflected);
    sum["power"] = {{"incident_on_ris", p_in}, {"reflected", p_out}, {"ratio", detail::num(p_in > 0 ? p_out / p_in : NAN)}};

    // ---- spectra (on the observation's lattice when it asks for one)
    const std::size_t spec_pad =
        std::holds_alternative<SpectrumObs>(s.observation) ? detail::override_pad(std::get<SpectrumObs>(s.observation).pad, opt) : 1;
    const Grid2D sg = g.padded(spec_pad);
    const Spectrum2D inc_spec = forward_spectrum(embed_centered(incident, sg));
    const Spectrum2D ref_spec = forward_spectrum(embed_centered(reflected, sg));
    sum["spectrum"] = detail::spectrum_summary(ref_spec, k0);
    sum["spectrum"]["pad"] = spec_pad;
    sum["incident_spectrum"] = detail::spectrum_summary(inc_spec, k0);
    std::optional<Spectrum2D> theory_spec;
    if (theory) {
        theory_spec = forward_spectrum(embed_centered(apply_mask(*theory, incident), sg));
        json t = detail::spectrum_summary(*theory_spec, k0);
        sum["optimize"]["theory_peak_abs"] = t["peak_abs"];
        sum["optimize"]["theory_energy"] = t["propagating_energy"];
        sum["optimize"]["peak_abs"] = sum["spectrum"]["peak_abs"];
        sum["optimize"]["peak_kx_over_k0"] = sum["spectrum"]["peak_kx_over_k0"];
        sum["optimize"]["energy"] = sum["spectrum"]["propagating_energy"];
    }
    if (write) {
        io::write_cf64(out / "incident_field.cf64", incident, "V/m");
        io::write_cf64(out / "reflected_field.cf64", reflected, "V/m");
        io::write_cf64(out / "reflected_spectrum.cf64", ref_spec, "V m");
        std::vector<const Spectrum2D*> cols{&inc_spec, &ref_spec};
        std::vector<std::string> names{"incident", "reflected"};
        if (theory_spec) {
            cols.push_back(&*theory_spec);
            names.push_back("target");
        }
        detail::write_kx_cut(out / "spectrum_kx_cut.csv", cols, names, sg.ny() / 2, k0);
    }

    // ---- observation
    std::visit(
        [&](const auto& obs) {
            using T = std::decay_t<decltype(obs)>;
            if constexpr (std::is_same_v<T, SweepObs>) {
                const std::size_t pad = detail::override_pad(obs.pad, opt);
                auto theta_r_at = [&](double th) {
                    if (multibeam_angles.empty()) return theta_r_for_obs;
                    double best = multibeam_angles.front();
                    for (double a : multibeam_angles)
                        if (std::abs(a - th) < std::abs(best - th)) best = a;
                    return best;
                };
                std::optional<FarFieldPattern> numeric, analytic;
                std::optional<NumericFarField> nff;
                if (obs.method != "analytic") {
                    nff.emplace(reflected, k0, pad);
                    numeric = pattern_sweep(
                        [&](double th) {
                            return nff->received_power(observation_in_plane(obs.r, th, obs.phi, obs.receiver_area),
                                                       theta_r_at(th));
                        },
                        obs.theta_min, obs.theta_max, obs.steps, obs.phi, obs.r);
                }
                if (obs.method != "numeric") {
                    const auto* op = std::get_if<SteerOp>(&s.operation);
                    if (!op || (s.beam.kind != "gaussian" && s.beam.kind != "ap") || s.shape.kind != ShapeKind::rect ||
                        th_i != s.beam.gaussian.theta_i)
                        throw ValidationError(
                            "/observation/method: the analytic pattern needs a Gaussian beam, a rect RIS and a steer "
                            "operation configured for the beam's incidence");
                    const auto spec = analytic_reflected_spectrum(s.beam.gaussian, s.grid.ris_x(), s.grid.ris_y(),
                                                                  op->theta_r, op->gamma0);
                    analytic = pattern_sweep(
                        [&](double th) {
                            return received_power_analytic(observation_in_plane(obs.r, th, obs.phi, obs.receiver_area), spec);
                        },
                        obs.theta_min, obs.theta_max, obs.steps, obs.phi, obs.r);
                }
                const FarFieldPattern& main = numeric ? *numeric : *analytic;
                json j;
                j["method"] = obs.method;
                j["pad"] = pad;
                j["r_m"] = obs.r;
                j["step_deg"] = rad2deg(main.step());
                j["peak_theta_deg"] = rad2deg(main.theta[main.argmax()]);
                j["peak_power_w"] = main.max_power();
                if (numeric && analytic) {
                    const auto [lo, hi] = detail::main_and_first_sidelobes(analytic->power);
                    j["analytic_peak_theta_deg"] = rad2deg(analytic->theta[analytic->argmax()]);
                    j["analytic_peak_power_w"] = analytic->max_power();
                    j["relative_l2_main_lobes"] = detail::relative_l2(analytic->power, numeric->power, lo, hi);
                    j["relative_l2_window_deg"] = {rad2deg(analytic->theta[lo]), rad2deg(analytic->theta[hi])};
                    j["relative_l2_full_sweep"] = detail::relative_l2(analytic->power, numeric->power, 0, main.theta.size() - 1);
                }
                if (!obs.lobes.empty()) {
                    double spacing = pi;
                    for (std::size_t n = 1; n < obs.lobes.size(); ++n) spacing = std::min(spacing, obs.lobes[n] - obs.lobes[n - 1]);
                    const Spectrum2D& lspec = nff ? nff->spectrum() : ref_spec;
                    const auto radiated = lobe_powers(lspec, k0, obs.lobes);
                    const auto energy = lobe_energies(lspec, k0, obs.lobes);
                    json lobes = json::array();
                    for (std::size_t n = 0; n < obs.lobes.size(); ++n) {
                        const std::size_t k = peak_index_near(main, obs.lobes[n], 0.5 * spacing);
                        lobes.push_back({{"target_deg", rad2deg(obs.lobes[n])},
                                         {"peak_theta_deg", rad2deg(main.theta[k])},
                                         {"peak_power_w", main.power[k]},
                                         {"radiated_power", radiated[n]},
                                         {"spectral_energy", energy[n]}});
                    }
                    j["lobes"] = lobes;
                }
                if (s.beam.kind == "plane_waves" && has_shift) {
                    // each wave leaves along sin θ = sin θ_w + (k_r − k_i)/k0
                    std::size_t ref = 0;
                    for (std::size_t n = 0; n < s.beam.waves.size(); ++n)
                        if (std::abs(s.beam.waves[n].theta_i - th_i) < std::abs(s.beam.waves[ref].theta_i - th_i)) ref = n;
                    json waves = json::array();
                    std::vector<double> pw(s.beam.waves.size(), 0.0);
                    for (std::size_t n = 0; n < s.beam.waves.size(); ++n) {
                        const auto& w = s.beam.waves[n];
                        const double sn = std::sin(w.theta_i) + shift_k / k0;
                        json e{{"label", w.label}, {"theta_i_deg", rad2deg(w.theta_i)}};
                        if (std::abs(sn) < 1.0) {
                            const double expect = std::asin(sn);
                            e["expected_theta_deg"] = rad2deg(expect);
                            if (expect >= main.theta.front() && expect <= main.theta.back()) {
                                const std::size_t k = peak_index_near(main, expect, deg2rad(2.0));
                                pw[n] = main.power[k];
                                e["found_theta_deg"] = rad2deg(main.theta[k]);
                                e["power_w"] = main.power[k];
                                e["level_db"] = detail::num(detail::db(main.power[k] / main.max_power()));
                            }
                        }
                        waves.push_back(e);
                    }
                    json sup;
                    for (std::size_t n = 0; n < pw.size(); ++n)
                        if (n != ref && pw[n] > 0.0) sup[s.beam.waves[n].label] = detail::db(pw[ref] / pw[n]);
                    j["waves"] = waves;
                    j["reference_wave"] = s.beam.waves[ref].label;
                    j["suppression_db"] = sup;
                }
                sum["sweep"] = j;
                if (write) {
                    for (auto* p : {&numeric, &analytic})
                        if (*p) (*p)->scenario_hash = scenario_hash(s);
                    io::write_atomically(out / "pattern.csv", [&](std::ostream& os) { write_pattern_csv(os, main); });
                    if (numeric && analytic)
                        io::write_atomically(out / "pattern_analytic.csv",
                                             [&](std::ostream& os) { write_pattern_csv(os, *analytic); });
                    json side{{"scenario", s.name}, {"scenario_hash", scenario_hash(s)}, {"r_m", obs.r},
                              {"phi_deg", rad2deg(obs.phi)}, {"receiver_area_m2", obs.receiver_area}, {"method", obs.method}};
                    io::write_text(out / "pattern.json", side.dump(2) + "\n");
                }
            } else if constexpr (std::is_same_v<T, PlanesObs>) {
                PropagationPlan plan(g, k0, detail::override_pad(obs.pad, opt), obs.policy);
                PropagationSource src(reflected, plan);
                for (double z : obs.z) src.check(z);
                const Grid2D pg = src.padded_grid();
                std::vector<double> xs(pg.nx());
                for (std::size_t i = 0; i < pg.nx(); ++i) xs[i] = pg.x(i);
                std::vector<std::vector<double>> lines(obs.z.size());
                parallel_for(obs.z.size(), [&](std::size_t n) {
                    const auto row = src.line_x(obs.z[n]);
                    lines[n].resize(row.size());
                    for (std::size_t i = 0; i < row.size(); ++i) lines[n][i] = std::norm(row[i]);
                });
                const auto* wf = std::get_if<WavefrontOp>(&s.operation);
                json planes = json::array();
                for (std::size_t n = 0; n < obs.z.size(); ++n) {
                    const LineLobe lobe = main_lobe(xs, lines[n]);
                    json e{{"z_m", obs.z[n]},          {"peak_x_m", lobe.peak_x},
                           {"peak_intensity", lobe.peak}, {"fwhm_m", lobe.fwhm},
                           {"second_moment_width_x_m", second_moment_width(xs, lines[n])}};
                    if (wf && wf->preset == "airy") e["trajectory_x_m"] = -wf->beta * obs.z[n] * obs.z[n];
                    planes.push_back(e);
                }
                if (obs.output == "full" && write) {
                    json manifest = json::array();
                    for (std::size_t n = 0; n < obs.z.size(); ++n) {
                        if (write) {
                            const ComplexField2D f = src.field(obs.z[n]);
                            char name[32];
                            std::snprintf(name, sizeof name, "plane_%03zu.cf64", n);
                            io::write_cf64(out / "planes" / name, f, "V/m");
                            manifest.push_back({{"index", n}, {"z_m", obs.z[n]}, {"file", std::string("planes/") + name}});
                        }
                    }
                    io::write_text(out / "planes.json", manifest.dump(2) + "\n");
                }
                sum["planes"] = {{"pad", plan.pad_factor}, {"padded_nx", pg.nx()}, {"cuts", planes}};
                if (write)
                    io::write_atomically(out / "lines.csv", [&](std::ostream& os) {
                        os << "z_m,x_m,intensity\n" << std::setprecision(17);
                        for (std::size_t n = 0; n < obs.z.size(); ++n)
                            for (std::size_t i = 0; i < xs.size(); ++i) os << obs.z[n] << ',' << xs[i] << ',' << lines[n][i] << '\n';
                    });
            } else if constexpr (std::is_same_v<T, OnAxisObs>) {
                PropagationPlan plan(g, k0, detail::override_pad(obs.pad, opt));
                PropagationSource src(reflected, plan);
                std::vector<double> zs(obs.steps), inten(obs.steps);
                for (std::size_t n = 0; n < obs.steps; ++n)
                    zs[n] = obs.z_min + (obs.z_max - obs.z_min) * static_cast<double>(n) / static_cast<double>(obs.steps - 1);
                const auto line = src.on_axis_scan(obs.z_min, zs[1] - zs[0], obs.steps);
                for (std::size_t n = 0; n < obs.steps; ++n) inten[n] = std::norm(line[n]);
                const std::size_t k = static_cast<std::size_t>(std::max_element(inten.begin(), inten.end()) - inten.begin());
                // boundary-image ripple rides on the focal envelope; a 0.5 m running mean exposes it
                const double dz = zs[1] - zs[0];
                const auto half = static_cast<std::ptrdiff_t>(std::lround(0.25 / dz));
                std::vector<double> smooth(obs.steps);
                for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(obs.steps); ++n) {
                    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, n - half);
                    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(obs.steps) - 1, n + half);
                    smooth[n] = std::accumulate(inten.begin() + lo, inten.begin() + hi + 1, 0.0) / static_cast<double>(hi - lo + 1);
                }
                const std::size_t ks = static_cast<std::size_t>(std::max_element(smooth.begin(), smooth.end()) - smooth.begin());
                json j{{"pad", plan.pad_factor}, {"z_peak_m", zs[k]}, {"peak_intensity", inten[k]},
                       {"step_m", dz}, {"z_peak_smoothed_m", zs[ks]}, {"smoothing_window_m", 2.0 * half * dz}};
                if (const auto* wf = std::get_if<WavefrontOp>(&s.operation); wf && wf->preset == "focus")
                    j["focal_m"] = wf->focal;
                sum["on_axis"] = j;
                if (write)
                    io::write_atomically(out / "on_axis.csv", [&](std::ostream& os) {
                        os << "z_m,intensity\n" << std::setprecision(17);
                        for (std::size_t n = 0; n < zs.size(); ++n) os << zs[n] << ',' << inten[n] << '\n';
                    });
            }
        },
        s.observation);

    if (write) io::write_text(out / "summary.json", sum.dump(2) + "\n");
    return sum;
}

}  // namespace ris
