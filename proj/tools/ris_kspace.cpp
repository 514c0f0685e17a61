// Command-line front end: runs scenario files (or bundled scenarios by name)
// and writes their artifacts plus summary.json.
//
// exit codes: 0 ok, 1 usage, 2 invalid scenario/parameters, 3 numerical
// failure, 4 I/O failure

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ris_kspace.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, usage = 1, invalid = 2, numerical = 3, io_failure = 4 };

ris::Scenario resolve(const std::string& ref)
{
    if (fs::is_regular_file(ref)) return ris::load_scenario_file(ref);
    if (auto s = ris::find_bundled(ref)) return *s;
    throw ris::ValidationError("scenario '" + ref + "' is neither a readable file nor a bundled scenario name "
                               "(see list-scenarios)");
}

struct Common {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> pad;
    bool quiet = false;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--scenario", c.scenario, "scenario file or bundled scenario name")->required();
    sub->add_option("--out", c.out, "output directory (default: out/<scenario name>)");
    sub->add_option("--seed", c.seed, "seed for randomised steps (overrides the scenario)");
    sub->add_option("--pad", c.pad, "zero-padding factor for the observation (overrides the scenario)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", c.quiet, "print nothing on success");
}

int run(const std::string& subcommand, const Common& c, const std::string& preset)
{
    const ris::Scenario s = resolve(c.scenario);
    if (!preset.empty()) {
        const auto* wf = std::get_if<ris::WavefrontOp>(&s.operation);
        if (!wf || wf->preset != preset)
            throw ris::ValidationError("scenario '" + s.name + "' does not describe a '" + preset + "' wavefront");
    }
    ris::RunOptions opt;
    opt.subcommand = subcommand;
    opt.out_dir = c.out.empty() ? fs::path("out") / s.name : fs::path(c.out);
    opt.seed = c.seed;
    opt.pad = c.pad;
    const auto t0 = std::chrono::steady_clock::now();
    const ris::json summary = ris::run_scenario(s, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.quiet) {
        std::cout << summary.dump(2) << '\n';
        std::cerr << s.name << ": wrote " << (*opt.out_dir / "summary.json").string() << " in " << secs << " s\n";
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RIS k-space spatial filtering: scenario runner"};
    app.require_subcommand(1);

    Common common;
    std::string preset;
    std::string export_dir;
    bool as_json = false;

    const char* ops[][2] = {{"steer", "linear phase steering"},
                            {"multibeam", "split into several weighted beams"},
                            {"bandpass", "spatial band-pass filtering with steering"},
                            {"wavefront", "focusing / Bessel / Airy / custom wavefront"},
                            {"optimize", "fit Lorentzian unit cells to a target mask"},
                            {"propagate", "near-field planes or on-axis intensity"},
                            {"farfield", "far-field received-power sweep"}};
    for (auto& [name, help] : ops) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, common);
        if (std::string(name) == "wavefront")
            sub->add_option("preset", preset, "expected preset")->check(CLI::IsMember({"focus", "bessel", "airy", "custom"}));
    }
    CLI::App* list = app.add_subcommand("list-scenarios", "list bundled scenarios");
    list->add_option("--export", export_dir, "also write every bundled scenario as <dir>/<name>.json");
    list->add_flag("--json", as_json, "print the list as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : usage;
    }

    try {
        if (list->parsed()) {
            ris::json names = ris::json::array();
            for (const auto& b : ris::bundled_scenarios()) {
                ris::parse_scenario(b.doc);
                if (!export_dir.empty()) ris::io::write_text(fs::path(export_dir) / (b.name + ".json"), ris::bundled_text(b));
                if (as_json)
                    names.push_back({{"name", b.name}, {"description", b.doc.value("description", "")}});
                else
                    std::cout << b.name << "\t" << b.doc.value("description", "") << '\n';
            }
            if (as_json) std::cout << names.dump(2) << '\n';
            return ok;
        }
        for (auto* sub : app.get_subcommands()) return run(sub->get_name(), common, preset);
    } catch (const ris::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid;
    } catch (const ris::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return io_failure;
    }
    return usage;
}
