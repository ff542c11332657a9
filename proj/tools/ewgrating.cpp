#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ewg/config.hpp"
#include "ewg/errors.hpp"
#include "ewg/runner.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::string model;
    std::vector<std::string> overrides;
    std::string format;
    std::string out;
    int jobs = -1;
    bool strict = false;
    std::string preset;
};

ewg::ConfigTree build_tree(const Flags& flags, const std::string& command) {
    ewg::ConfigTree tree;
    if (!flags.preset.empty()) tree = ewg::preset_tree(flags.preset);
    if (!flags.config_path.empty()) {
        // A config file on top of a preset replaces only the keys it names.
        const ewg::ConfigTree file = ewg::read_config_file(flags.config_path);
        for (const auto& [section, body] : file)
            for (const auto& [key, value] : body) tree.put(section + "." + key, value.data());
    }
    if (flags.preset.empty()) tree.put("run.command", command);
    if (!flags.model.empty()) tree.put("run.model", flags.model);
    for (const auto& assignment : flags.overrides) ewg::apply_override(tree, assignment);
    if (!flags.format.empty()) tree.put("output.format", flags.format);
    if (!flags.out.empty()) tree.put("output.path", flags.out);
    if (flags.jobs >= 0) tree.put("output.jobs", std::to_string(flags.jobs));
    if (flags.strict) tree.put("output.strict", "true");
    return tree;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diffraction of atoms from evanescent-wave gratings"};
    app.require_subcommand(1);
    Flags flags;

    app.add_option("--config", flags.config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--model", flags.model, "one-level | two-level | multilevel-j12");
    app.add_option("--set", flags.overrides, "override a config value, section.key=value (repeatable)");
    app.add_option("--format", flags.format, "csv | records")->check(CLI::IsMember({"csv", "records"}));
    app.add_option("--out", flags.out, "output file (default: standard output)");
    app.add_option("--jobs", flags.jobs, "worker threads for scans (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--strict", flags.strict, "reject unknown keys; fail on any failed or flagged point");

    for (const char* name : {"solve", "scan", "compare", "adiabatic"}) app.add_subcommand(name);
    app.get_subcommand("solve")->description("coupled-wave solve at one configuration");
    app.get_subcommand("scan")->description("coupled-wave solves along the configured scan axis");
    app.get_subcommand("compare")->description("analytic models against the coupled-wave solve");
    app.get_subcommand("adiabatic")->description("adiabatic potential surfaces and avoided crossings");
    auto* preset = app.add_subcommand("preset", "run a figure-reproduction preset");
    preset->add_option("name", flags.preset, "fig2 | fig5 | fig6")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        const ewg::ConfigTree tree = build_tree(flags, command);
        const ewg::ParsedConfig parsed = ewg::parse_config(tree, flags.strict);
        return ewg::run(parsed, std::cout, std::cerr);
    } catch (const ewg::Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
}
