#pragma once

// Scenario files (schema "ris-kspace/1"). Angles are in degrees and pitches
// may be given in wavelengths; loading converts everything to SI and radians.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "beams.hpp"
#include "farfield.hpp"
#include "optimize.hpp"
#include "propagation.hpp"
#include "ris.hpp"

namespace ris {

using json = nlohmann::json;

inline constexpr const char* scenario_schema = "ris-kspace/1";

/// Scenario rejected by the schema; the message starts with the JSON path.
class SchemaError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

namespace detail {

class Node {
public:
    Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& raw() const { return *j_; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        throw SchemaError(path_ + "/" + key + ": " + what);
    }

    void allow(std::initializer_list<const char*> keys) const
    {
        for (auto it = j_->begin(); it != j_->end(); ++it) {
            bool ok = false;
            for (const char* k : keys) ok = ok || it.key() == k;
            if (!ok) fail(it.key(), "unknown field");
        }
    }

    bool has(const std::string& key) const { return j_->contains(key); }

    double num(const std::string& key) const
    {
        if (!has(key)) fail(key, "missing required number");
        const json& v = j_->at(key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }
    double num_or(const std::string& key, double def) const { return has(key) ? num(key) : def; }

    double positive(const std::string& key) const
    {
        const double d = num(key);
        if (!(d > 0.0)) fail(key, "must be positive");
        return d;
    }
    double positive_or(const std::string& key, double def) const { return has(key) ? positive(key) : def; }

    double fraction(const std::string& key, double def) const
    {
        const double d = has(key) ? num(key) : def;
        if (!(d > 0.0 && d <= 1.0)) fail(key, "must lie in (0, 1]");
        return d;
    }

    std::uint64_t count(const std::string& key, std::uint64_t min = 1) const
    {
        if (!has(key)) fail(key, "missing required integer");
        const json& v = j_->at(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < static_cast<std::int64_t>(min))
            fail(key, "expected an integer >= " + std::to_string(min));
        return v.get<std::uint64_t>();
    }
    std::uint64_t count_or(const std::string& key, std::uint64_t def, std::uint64_t min = 1) const
    {
        return has(key) ? count(key, min) : def;
    }

    std::string str(const std::string& key) const
    {
        if (!has(key)) fail(key, "missing required string");
        const json& v = j_->at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }
    std::string str_or(const std::string& key, const std::string& def) const { return has(key) ? str(key) : def; }

    std::string choice(const std::string& key, std::initializer_list<const char*> options,
                       const char* def = nullptr) const
    {
        if (!has(key) && def) return def;
        const std::string s = str(key);
        std::string list;
        for (const char* o : options) {
            if (s == o) return s;
            list += list.empty() ? o : std::string(" | ") + o;
        }
        fail(key, "expected one of " + list + ", got \"" + s + "\"");
    }

    Node obj(const std::string& key) const
    {
        if (!has(key)) fail(key, "missing required object");
        if (!j_->at(key).is_object()) fail(key, "expected an object");
        return Node(j_->at(key), path_ + "/" + key);
    }

    std::vector<Node> objects(const std::string& key) const
    {
        if (!has(key)) fail(key, "missing required array");
        const json& v = j_->at(key);
        if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            Node n(v[i], path_ + "/" + key + "/" + std::to_string(i));
            if (!v[i].is_object()) throw SchemaError(n.path() + ": expected an object");
            out.push_back(n);
        }
        return out;
    }

    std::vector<double> numbers(const std::string& key) const
    {
        if (!has(key)) fail(key, "missing required array");
        const json& v = j_->at(key);
        if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) fail(key + "/" + std::to_string(i), "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    /// Degrees in the file, radians out; |angle| < limit.
    double angle(const std::string& key, double limit_deg = 90.0) const
    {
        const double d = num(key);
        if (!(std::abs(d) < limit_deg)) fail(key, "angle magnitude must be below " + std::to_string(int(limit_deg)) + " deg");
        return deg2rad(d);
    }
    double angle_or(const std::string& key, double def_deg, double limit_deg = 90.0) const
    {
        return has(key) ? angle(key, limit_deg) : deg2rad(def_deg);
    }

private:
    const json* j_;
    std::string path_;
};

}  // namespace detail

// ---------------------------------------------------------------- model

enum class OperationKind { steer, multibeam, bandpass, wavefront, optimize };

inline const std::vector<OperationKind>& all_operation_kinds()
{
    static const std::vector<OperationKind> v{OperationKind::steer, OperationKind::multibeam, OperationKind::bandpass,
                                              OperationKind::wavefront, OperationKind::optimize};
    return v;
}

inline std::string to_string(OperationKind k)
{
    switch (k) {
    case OperationKind::steer: return "steer";
    case OperationKind::multibeam: return "multibeam";
    case OperationKind::bandpass: return "bandpass";
    case OperationKind::wavefront: return "wavefront";
    case OperationKind::optimize: return "optimize";
    }
    return "?";
}

inline std::optional<OperationKind> operation_from_string(const std::string& s)
{
    for (auto k : all_operation_kinds())
        if (to_string(k) == s) return k;
    return std::nullopt;
}

struct GridSpec {
    std::size_t elements_x = 0, elements_y = 0;
    double pitch_x = 0.0, pitch_y = 0.0;  // m
    std::size_t margin = 0;

    Grid2D grid() const { return ris_grid(elements_x, elements_y, pitch_x, pitch_y, margin); }
    double ris_x() const { return static_cast<double>(elements_x) * pitch_x; }
    double ris_y() const { return static_cast<double>(elements_y) * pitch_y; }
};

enum class ShapeKind { rect, circle, sinc, full };

struct ShapeSpec {
    ShapeKind kind = ShapeKind::rect;
    double radius = 0.0;  // circle, m
    int lobes = 1;        // sinc
};

struct PlaneWave {
    std::string label;
    double theta_i = 0.0;  // rad
    double amplitude = 1.0;
};

/// Incident illumination: a sum of plane waves or one Gaussian footprint.
struct BeamSpec {
    std::string kind;  // plane | plane_waves | gaussian | ap
    std::vector<PlaneWave> waves;
    GaussianBeamSpec gaussian{};
    std::optional<ApSpec> ap;

    /// Angle used as θi by operations built from this beam.
    double theta_i() const { return kind == "gaussian" || kind == "ap" ? gaussian.theta_i : waves.front().theta_i; }
};

struct SteerOp {
    double theta_r = 0.0, gamma0 = 1.0;
};
struct MultibeamOp {
    std::vector<BeamWeight> beams;
    bool uniform = false;  // normalise for uniform instead of actual illumination
    double gamma0 = 1.0;
};
struct BandpassOp {
    double theta_pass = 0.0, theta_r = 0.0, k_width_k0 = 0.0, gamma0 = 1.0;
};
struct WavefrontOp {
    std::string preset;  // focus | bessel | airy | custom
    double focal = 0.0, C = 0.0, beta = 0.0;
    double a = 0.0, exponent = 1.0;
    WavefrontSymmetry symmetry = WavefrontSymmetry::radial;
    double gamma0 = 1.0;
};
struct OptimizeOp {
    double theta_r = 0.0;
    UnitCellModel model;
    std::size_t max_sweeps = 50;
    double rel_tol = 1e-6;
};
using Operation = std::variant<SteerOp, MultibeamOp, BandpassOp, WavefrontOp, OptimizeOp>;

inline OperationKind kind_of(const Operation& op) { return static_cast<OperationKind>(op.index()); }

struct SweepObs {
    double r = 1.0, phi = 0.0;
    double theta_min = 0.0, theta_max = 0.0;
    std::size_t steps = 2;
    double receiver_area = 1e-4;
    std::string method = "numeric";  // numeric | analytic | both
    std::size_t pad = default_farfield_pad;
    std::vector<double> lobes;  // rad, increasing
};
struct PlanesObs {
    std::vector<double> z;
    std::size_t pad = 2;
    std::string output = "line_x";  // line_x | full
    EvanescentPolicy policy = EvanescentPolicy::decay;
};
struct OnAxisObs {
    double z_min = 0.0, z_max = 0.0;
    std::size_t steps = 2;
    std::size_t pad = 2;
};
struct SpectrumObs {
    std::size_t pad = 1;
};
using ObservationSpec = std::variant<SweepObs, PlanesObs, OnAxisObs, SpectrumObs>;

struct Scenario {
    std::string name, description;
    double frequency_ghz = 0.0;
    GridSpec grid;
    ShapeSpec shape;
    BeamSpec beam;
    Operation operation;
    ObservationSpec observation;
    double design_theta_i = 0.0;  // incidence the RIS is configured for, rad
    std::uint64_t seed = 1;
    json source;  // the document it was loaded from

    double k0() const { return wavenumber_from_ghz(frequency_ghz); }
    double wavelength() const { return wavelength_from_ghz(frequency_ghz); }
    OperationKind operation_kind() const { return kind_of(operation); }
};

// ---------------------------------------------------------------- parsing

namespace detail {

inline GridSpec parse_grid(const Node& n, double lambda)
{
    n.allow({"elements_x", "elements_y", "pitch_lambda", "pitch_m", "margin"});
    GridSpec g;
    g.elements_x = n.count("elements_x");
    g.elements_y = n.count("elements_y");
    if (n.has("pitch_lambda") == n.has("pitch_m")) n.fail("pitch_lambda", "give exactly one of pitch_lambda, pitch_m");
    const double p = n.has("pitch_m") ? n.positive("pitch_m") : n.positive("pitch_lambda") * lambda;
    g.pitch_x = g.pitch_y = p;
    g.margin = n.count_or("margin", 0, 0);
    return g;
}

inline ShapeSpec parse_shape(const Node& n)
{
    n.allow({"kind", "radius_m", "lobes"});
    ShapeSpec s;
    const std::string k = n.choice("kind", {"rect", "circle", "sinc", "full"});
    if (k == "rect") s.kind = ShapeKind::rect;
    if (k == "circle") {
        s.kind = ShapeKind::circle;
        s.radius = n.positive_or("radius_m", 0.0);
    }
    if (k == "sinc") {
        s.kind = ShapeKind::sinc;
        s.lobes = static_cast<int>(n.count_or("lobes", 1));
    }
    if (k == "full") s.kind = ShapeKind::full;
    if (k != "circle" && n.has("radius_m")) n.fail("radius_m", "only valid for kind circle");
    if (k != "sinc" && n.has("lobes")) n.fail("lobes", "only valid for kind sinc");
    return s;
}

inline BeamSpec parse_beam(const Node& n, double k0)
{
    BeamSpec b;
    b.kind = n.choice("kind", {"plane", "plane_waves", "gaussian", "ap"});
    if (b.kind == "plane") {
        n.allow({"kind", "theta_i_deg", "amplitude"});
        b.waves.push_back({"", n.angle("theta_i_deg"), n.num_or("amplitude", 1.0)});
    } else if (b.kind == "plane_waves") {
        n.allow({"kind", "waves"});
        for (const auto& w : n.objects("waves")) {
            w.allow({"label", "theta_i_deg", "amplitude"});
            b.waves.push_back({w.str_or("label", ""), w.angle("theta_i_deg"), w.num_or("amplitude", 1.0)});
        }
    } else if (b.kind == "gaussian") {
        n.allow({"kind", "waist_m", "theta_i_deg", "amplitude"});
        b.gaussian = {n.num_or("amplitude", 1.0), n.positive("waist_m"), n.angle("theta_i_deg"), k0};
    } else {
        n.allow({"kind", "power_w", "gain_dbi", "distance_m", "theta_i_deg"});
        ApSpec ap;
        ap.power = n.positive("power_w");
        const double gdb = n.num("gain_dbi");
        if (gdb < 0.0) n.fail("gain_dbi", "must be >= 0 dBi");
        ap.gain = std::pow(10.0, gdb / 10.0);
        ap.distance = n.positive("distance_m");
        b.ap = ap;
        b.gaussian = waist_from_gain(ap, k0, n.angle("theta_i_deg"));
    }
    return b;
}

inline Operation parse_operation(const Node& n)
{
    const std::string kind = n.choice("kind", {"steer", "multibeam", "bandpass", "wavefront", "optimize"});
    switch (*operation_from_string(kind)) {
    case OperationKind::steer: {
        n.allow({"kind", "theta_i_deg", "theta_r_deg", "gamma0"});
        return SteerOp{n.angle("theta_r_deg"), n.fraction("gamma0", 1.0)};
    }
    case OperationKind::multibeam: {
        n.allow({"kind", "theta_i_deg", "beams", "normalization", "gamma0"});
        MultibeamOp op;
        for (const auto& b : n.objects("beams")) {
            b.allow({"theta_r_deg", "weight"});
            const double w = b.num_or("weight", 1.0);
            if (!(w >= 0.0)) b.fail("weight", "must be >= 0");
            op.beams.push_back({b.angle("theta_r_deg"), w});
        }
        op.uniform = n.choice("normalization", {"incident", "uniform"}, "incident") == "uniform";
        op.gamma0 = n.fraction("gamma0", 1.0);
        return op;
    }
    case OperationKind::bandpass: {
        n.allow({"kind", "theta_pass_deg", "theta_r_deg", "k_width_k0", "gamma0"});
        return BandpassOp{n.angle("theta_pass_deg"), n.angle("theta_r_deg"), n.positive("k_width_k0"),
                          n.fraction("gamma0", 1.0)};
    }
    case OperationKind::wavefront: {
        WavefrontOp op;
        op.preset = n.choice("preset", {"focus", "bessel", "airy", "custom"});
        op.gamma0 = n.fraction("gamma0", 1.0);
        if (op.preset == "focus") {
            n.allow({"kind", "theta_i_deg", "preset", "focal_m", "gamma0"});
            op.focal = n.positive("focal_m");
        } else if (op.preset == "bessel") {
            n.allow({"kind", "theta_i_deg", "preset", "C", "gamma0"});
            op.C = n.positive("C");
        } else if (op.preset == "airy") {
            n.allow({"kind", "theta_i_deg", "preset", "beta_per_m", "gamma0"});
            op.beta = n.positive("beta_per_m");
        } else {
            n.allow({"kind", "theta_i_deg", "preset", "a", "exponent", "symmetry", "gamma0"});
            op.a = n.num("a");
            op.exponent = n.positive("exponent");
            op.symmetry = n.choice("symmetry", {"radial", "x_only"}, "radial") == "radial" ? WavefrontSymmetry::radial
                                                                                           : WavefrontSymmetry::x_only;
        }
        return op;
    }
    case OperationKind::optimize: {
        n.allow({"kind", "theta_i_deg", "theta_r_deg", "a_e_ghz", "gamma_e_ghz", "max_sweeps", "rel_tol"});
        OptimizeOp op;
        op.theta_r = n.angle("theta_r_deg");
        op.model.a_e = n.positive_or("a_e_ghz", 0.4);
        op.model.gamma_e = n.positive_or("gamma_e_ghz", 0.05);
        op.max_sweeps = n.count_or("max_sweeps", 50);
        op.rel_tol = n.num_or("rel_tol", 1e-6);
        if (!(op.rel_tol >= 0.0)) n.fail("rel_tol", "must be >= 0");
        return op;
    }
    }
    n.fail("kind", "unhandled operation");
}

inline ObservationSpec parse_observation(const Node& n)
{
    const std::string kind = n.choice("kind", {"sweep", "planes", "on_axis", "spectrum"});
    if (kind == "sweep") {
        n.allow({"kind", "r_m", "phi_deg", "theta_min_deg", "theta_max_deg", "steps", "receiver_area_m2", "method", "pad",
                 "lobes_deg"});
        SweepObs s;
        s.r = n.positive("r_m");
        s.phi = deg2rad(n.num_or("phi_deg", 0.0));
        s.theta_min = n.angle("theta_min_deg");
        s.theta_max = n.angle("theta_max_deg");
        if (!(s.theta_max > s.theta_min)) n.fail("theta_max_deg", "must exceed theta_min_deg");
        s.steps = n.count("steps", 2);
        s.receiver_area = n.positive_or("receiver_area_m2", 1e-4);
        s.method = n.choice("method", {"numeric", "analytic", "both"}, "numeric");
        s.pad = n.count_or("pad", default_farfield_pad);
        if (n.has("lobes_deg")) {
            for (double d : n.numbers("lobes_deg")) {
                if (!(std::abs(d) < 90.0)) n.fail("lobes_deg", "angles must be below 90 deg");
                if (!s.lobes.empty() && !(deg2rad(d) > s.lobes.back())) n.fail("lobes_deg", "angles must increase");
                s.lobes.push_back(deg2rad(d));
            }
        }
        return s;
    }
    if (kind == "planes") {
        n.allow({"kind", "z_m", "pad", "output", "policy"});
        PlanesObs p;
        p.z = n.numbers("z_m");
        for (double z : p.z)
            if (!(z >= 0.0)) n.fail("z_m", "distances must be >= 0");
        p.pad = n.count_or("pad", 2);
        p.output = n.choice("output", {"line_x", "full"}, "line_x");
        p.policy = n.choice("policy", {"decay", "truncate"}, "decay") == "decay" ? EvanescentPolicy::decay
                                                                                 : EvanescentPolicy::truncate;
        return p;
    }
    if (kind == "on_axis") {
        n.allow({"kind", "z_min_m", "z_max_m", "steps", "pad"});
        OnAxisObs o;
        o.z_min = n.positive("z_min_m");
        o.z_max = n.positive("z_max_m");
        if (!(o.z_max > o.z_min)) n.fail("z_max_m", "must exceed z_min_m");
        o.steps = n.count("steps", 2);
        o.pad = n.count_or("pad", 2);
        return o;
    }
    n.allow({"kind", "pad"});
    return SpectrumObs{n.count_or("pad", 1)};
}

}  // namespace detail

/// Validates a scenario document and converts it to SI units.
inline Scenario parse_scenario(const json& doc)
{
    if (!doc.is_object()) throw SchemaError("/: expected an object");
    detail::Node root(doc, "");
    root.allow({"schema", "name", "description", "frequency_ghz", "grid", "shape", "beam", "operation", "observation",
                "seed"});
    if (root.str("schema") != scenario_schema)
        root.fail("schema", std::string("unsupported schema, expected \"") + scenario_schema + "\"");
    Scenario s;
    s.name = root.str("name");
    s.description = root.str_or("description", "");
    s.frequency_ghz = root.positive("frequency_ghz");
    const double lambda = s.wavelength();
    s.grid = detail::parse_grid(root.obj("grid"), lambda);
    s.shape = root.has("shape") ? detail::parse_shape(root.obj("shape")) : ShapeSpec{};
    s.beam = detail::parse_beam(root.obj("beam"), s.k0());
    const detail::Node op = root.obj("operation");
    s.operation = detail::parse_operation(op);
    if (auto* bp = std::get_if<BandpassOp>(&s.operation)) s.design_theta_i = bp->theta_pass;
    else s.design_theta_i = op.has("theta_i_deg") ? op.angle("theta_i_deg") : s.beam.theta_i();
    s.observation = detail::parse_observation(root.obj("observation"));
    s.seed = root.has("seed") ? root.count("seed", 0) : 1;
    s.source = doc;

    if (s.shape.kind == ShapeKind::circle && s.shape.radius == 0.0) s.shape.radius = 0.5 * std::min(s.grid.ris_x(), s.grid.ris_y());
    if (auto* op = std::get_if<BandpassOp>(&s.operation); op && s.beam.kind != "plane" && s.beam.kind != "plane_waves")
        throw SchemaError("/operation: bandpass needs a plane or plane_waves beam");
    return s;
}

/// Parses JSON text; syntax errors report the byte offset and line.
inline Scenario parse_scenario_text(const std::string& text, const std::string& origin = "scenario")
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t off = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(off), '\n');
        throw SchemaError(origin + ":" + std::to_string(line) + ": JSON syntax error: " + e.what());
    }
    try {
        return parse_scenario(doc);
    } catch (const SchemaError& e) {
        throw SchemaError(origin + ": " + e.what());
    }
}

inline Scenario load_scenario_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open scenario file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path.string());
}

// ---------------------------------------------------------------- building blocks

inline ShapeMask make_shape(const Scenario& s)
{
    const double Lx = s.grid.ris_x(), Ly = s.grid.ris_y();
    switch (s.shape.kind) {
    case ShapeKind::rect: return RectShape{Lx, Ly};
    case ShapeKind::circle: return CircleShape{s.shape.radius};
    case ShapeKind::sinc: return SincShape{Lx, Ly, s.shape.lobes};
    case ShapeKind::full: return full_grid_shape();
    }
    return RectShape{Lx, Ly};
}

/// Incident field on the scenario grid. Each plane wave carries e^{+j k_i x}
/// like the Gaussian footprint.
inline ComplexField2D make_incident(const Scenario& s, const Grid2D& g)
{
    if (s.beam.kind == "gaussian" || s.beam.kind == "ap") return gaussian_footprint(s.beam.gaussian, g);
    const double k0 = s.k0();
    for (const auto& w : s.beam.waves) check_tilt_resolved(k0 * std::sin(w.theta_i), g, "incident plane wave");
    return ComplexField2D::generate(g, [&](std::size_t i, std::size_t) {
        cplx v = 0.0;
        for (const auto& w : s.beam.waves) v += w.amplitude * std::polar(1.0, k0 * std::sin(w.theta_i) * g.x(i));
        return v;
    });
}

inline WavefrontSpec make_wavefront(const WavefrontOp& op, double k0, double theta_i)
{
    WavefrontSpec w;
    if (op.preset == "focus") w = focus_preset(op.focal, k0, theta_i);
    else if (op.preset == "bessel") w = bessel_preset(op.C, k0, theta_i);
    else if (op.preset == "airy") w = airy_preset(op.beta, k0, theta_i);
    else w = WavefrontSpec{op.a, op.exponent, op.symmetry, theta_i, k0, 1.0};
    w.gamma0 = op.gamma0;
    return w;
}

// ---------------------------------------------------------------- bundled set

struct BundledScenario {
    std::string name;
    json doc;
};

namespace detail {

inline json base_doc(const std::string& name, const std::string& description, double nx, double pitch_lambda,
                     int margin = 0)
{
    json g = {{"elements_x", static_cast<int>(nx)}, {"elements_y", static_cast<int>(nx)}, {"pitch_lambda", pitch_lambda}};
    if (margin) g["margin"] = margin;
    return {{"schema", scenario_schema}, {"name", name}, {"description", description}, {"frequency_ghz", 150.0},
            {"grid", g}, {"shape", {{"kind", "rect"}}}};
}

inline json multibeam_doc(const std::string& name, const std::string& desc, const std::vector<double>& angles,
                          const std::vector<double>& weights)
{
    json d = base_doc(name, desc, 50, 0.2);
    d["beam"] = {{"kind", "plane"}, {"theta_i_deg", 0.0}};
    json beams = json::array();
    for (std::size_t n = 0; n < angles.size(); ++n) beams.push_back({{"theta_r_deg", angles[n]}, {"weight", weights[n]}});
    d["operation"] = {{"kind", "multibeam"}, {"beams", beams}, {"normalization", "uniform"}};
    d["observation"] = {{"kind", "sweep"},  {"r_m", 5.0},  {"theta_min_deg", -20.0}, {"theta_max_deg", 80.0},
                        {"steps", 201},     {"pad", 8},    {"method", "numeric"},    {"lobes_deg", angles}};
    return d;
}

}  // namespace detail

/// Bundled scenarios in a fixed order.
inline const std::vector<BundledScenario>& bundled_scenarios()
{
    static const std::vector<BundledScenario> list = [] {
        using detail::base_doc;
        std::vector<BundledScenario> v;
        auto add = [&](json d) { v.push_back({d["name"].get<std::string>(), std::move(d)}); };

        for (auto [name, thr] : {std::pair{"fig2a", 0.0}, {"fig2b", 30.0}, {"fig2c", 60.0}}) {
            json d = base_doc(name, "Gaussian beam (w=2 cm) at normal incidence steered to " +
                                        std::to_string(int(thr)) + " deg by an unbounded RIS; near-field planes",
                              400, 0.25);
            d["shape"] = {{"kind", "full"}};
            d["beam"] = {{"kind", "gaussian"}, {"waist_m", 0.02}, {"theta_i_deg", 0.0}};
            d["operation"] = {{"kind", "steer"}, {"theta_r_deg", thr}};
            d["observation"] = {{"kind", "planes"}, {"z_m", {0.0, 0.05, 0.1, 0.15}}, {"pad", 4}};
            add(d);
        }
        {
            json d = base_doc("fig3a", "Gaussian beam (w=2 cm, 45 deg) on a 10 cm RIS steering to 0 deg: partial illumination",
                              250, 0.2);
            d["beam"] = {{"kind", "gaussian"}, {"waist_m", 0.02}, {"theta_i_deg", 45.0}};
            d["operation"] = {{"kind", "steer"}, {"theta_r_deg", 0.0}};
            d["observation"] = {{"kind", "spectrum"}, {"pad", 2}};
            add(d);
        }
        {
            json d = base_doc("fig3c", "Same beam on a 1 cm RIS: full illumination, sinc-shaped k-content", 25, 0.2);
            d["beam"] = {{"kind", "gaussian"}, {"waist_m", 0.02}, {"theta_i_deg", 45.0}};
            d["operation"] = {{"kind", "steer"}, {"theta_r_deg", 0.0}};
            d["observation"] = {{"kind", "spectrum"}, {"pad", 16}};
            add(d);
        }
        for (auto [name, dist] : {std::pair{"fig4a", 1.0}, {"fig4b", 2.0}, {"fig4c", 10.0}}) {
            json d = base_doc(name, "AP (1 W, 40 dBi) at " + std::to_string(int(dist)) +
                                        " m, 45 deg onto a 250x250 RIS steering to 0 deg; analytic vs numeric pattern",
                              250, 0.2);
            d["beam"] = {{"kind", "ap"}, {"power_w", 1.0}, {"gain_dbi", 40.0}, {"distance_m", dist}, {"theta_i_deg", 45.0}};
            d["operation"] = {{"kind", "steer"}, {"theta_r_deg", 0.0}};
            d["observation"] = {{"kind", "sweep"},           {"r_m", 20.0},  {"theta_min_deg", -10.0},
                                {"theta_max_deg", 10.0},     {"steps", 401}, {"receiver_area_m2", 1e-4},
                                {"method", "both"},          {"pad", 8}};
            add(d);
        }
        for (auto [name, kind] : {std::pair{"fig5a", "circle"}, {"fig5b", "sinc"}}) {
            json d = base_doc(name, std::string("Plane wave at 30 deg on a ") + kind +
                                        "-shaped RIS steering to 0 deg; shaped k-content",
                              100, 0.25);
            d["shape"] = {{"kind", kind}};
            d["beam"] = {{"kind", "plane"}, {"theta_i_deg", 30.0}};
            d["operation"] = {{"kind", "steer"}, {"theta_r_deg", 0.0}};
            d["observation"] = {{"kind", "spectrum"}, {"pad", 4}};
            add(d);
        }
        add(detail::multibeam_doc("fig6a", "Two equal beams at 0 and 60 deg", {0.0, 60.0}, {1.0, 1.0}));
        add(detail::multibeam_doc("fig6b", "Three equal beams at 0, 30, 60 deg", {0.0, 30.0, 60.0}, {1.0, 1.0, 1.0}));
        add(detail::multibeam_doc("fig6c", "Five equal beams from 0 to 60 deg", {0.0, 15.0, 30.0, 45.0, 60.0},
                                  {1.0, 1.0, 1.0, 1.0, 1.0}));
        const std::vector<double> five{0.0, 15.0, 30.0, 45.0, 60.0};
        add(detail::multibeam_doc("fig6d", "Five beams, the 15 deg beam promoted", five, {0.5, 1.0, 0.5, 0.5, 0.5}));
        add(detail::multibeam_doc("fig6e", "Five beams, the 15 deg beam suppressed", five, {1.0, 0.25, 1.0, 1.0, 1.0}));
        add(detail::multibeam_doc("fig6f", "Five beams, the 15 and 45 deg beams promoted", five, {0.5, 1.0, 0.5, 1.0, 0.5}));
        for (auto [name, filtered] : {std::pair{"fig7a", false}, {"fig7b", true}}) {
            json d = base_doc(name, filtered ? "Three plane waves, RIS band-pass around beam B (k_F = 0.025 k0)"
                                             : "Three plane waves (A 60, B 40, C 15 deg) on a steering RIS, no filtering",
                              100, 0.5);
            d["beam"] = {{"kind", "plane_waves"},
                         {"waves",
                          {{{"label", "A"}, {"theta_i_deg", 60.0}},
                           {{"label", "B"}, {"theta_i_deg", 40.0}},
                           {{"label", "C"}, {"theta_i_deg", 15.0}}}}};
            if (filtered)
                d["operation"] = {{"kind", "bandpass"}, {"theta_pass_deg", 40.0}, {"theta_r_deg", 0.0}, {"k_width_k0", 0.025}};
            else
                d["operation"] = {{"kind", "steer"}, {"theta_i_deg", 40.0}, {"theta_r_deg", 0.0}};
            d["observation"] = {{"kind", "sweep"}, {"r_m", 20.0}, {"theta_min_deg", -40.0}, {"theta_max_deg", 40.0},
                                {"steps", 801},    {"pad", 8},    {"method", "numeric"}};
            add(d);
        }
        for (auto [name, ae] : {std::pair{"fig8c", 0.4}, {"fig8e", 0.2}}) {
            json d = base_doc(name, "Lorentzian unit cells (a_e = " + std::string(ae == 0.4 ? "0.4" : "0.2") +
                                        " GHz) optimised to steer a normal plane wave to 30 deg",
                              100, 0.5, 1);
            d["beam"] = {{"kind", "plane"}, {"theta_i_deg", 0.0}};
            d["operation"] = {{"kind", "optimize"}, {"theta_r_deg", 30.0}, {"a_e_ghz", ae}, {"gamma_e_ghz", 0.05}};
            d["observation"] = {{"kind", "spectrum"}, {"pad", 1}};
            d["seed"] = 1;
            add(d);
        }
        {
            json d = base_doc("fig9a", "Focusing RIS (d_f = 10 m), 500x500 at lambda/2, on-axis intensity", 500, 0.5);
            d["beam"] = {{"kind", "plane"}, {"theta_i_deg", 0.0}};
            d["operation"] = {{"kind", "wavefront"}, {"preset", "focus"}, {"focal_m", 10.0}};
            d["observation"] = {{"kind", "on_axis"}, {"z_min_m", 1.0}, {"z_max_m", 20.0}, {"steps", 381}, {"pad", 4}};
            add(d);
        }
        {
            json d = base_doc("fig9b", "Bessel-beam RIS (C = 0.0125), transverse cuts from 2 to 12 m", 500, 0.5);
            d["beam"] = {{"kind", "plane"}, {"theta_i_deg", 0.0}};
            d["operation"] = {{"kind", "wavefront"}, {"preset", "bessel"}, {"C", 0.0125}};
            d["observation"] = {{"kind", "planes"}, {"z_m", {2.0, 4.0, 6.0, 8.0, 10.0, 12.0}}, {"pad", 2}};
            add(d);
        }
        {
            json d = base_doc("fig9c", "Airy-beam RIS (beta = 0.0025 1/m), transverse cuts from 5 to 20 m", 500, 0.5);
            d["beam"] = {{"kind", "plane"}, {"theta_i_deg", 0.0}};
            d["operation"] = {{"kind", "wavefront"}, {"preset", "airy"}, {"beta_per_m", 0.0025}};
            d["observation"] = {
                {"kind", "planes"}, {"z_m", {5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0}}, {"pad", 6}};
            add(d);
        }
        return v;
    }();
    return list;
}

inline std::optional<Scenario> find_bundled(const std::string& name)
{
    for (const auto& b : bundled_scenarios())
        if (b.name == name) return parse_scenario(b.doc);
    return std::nullopt;
}

/// Canonical on-disk text of a bundled scenario.
inline std::string bundled_text(const BundledScenario& b) { return b.doc.dump(2) + "\n"; }

}  // namespace ris
