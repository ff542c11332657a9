#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "ewg/coupled_wave.hpp"
#include "ewg/kinematics.hpp"
#include "ewg/scan.hpp"

namespace ewg {

// Section/key tree as read from an INI file; every value is kept as text.
using ConfigTree = boost::property_tree::ptree;

enum class Command { Solve, Scan, Compare, Adiabatic };
enum class OutputFormat { Csv, Records };
// Unit of detuning scan coordinates: recoil frequencies or multiples of the Doppler shift.
enum class DetuningUnit { Recoil, Doppler };

std::string_view to_string(Command command);
std::string_view to_string(OutputFormat format);
std::string_view to_string(DetuningUnit unit);
Command command_from_string(std::string_view text);
OutputFormat output_format_from_string(std::string_view text);

// Either an explicit list of coordinates or `points` evenly spaced values from start to stop.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;
    std::vector<double> values;

    std::vector<double> coordinates() const;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct LandscapeOptions {
    std::optional<double> z_min;
    std::optional<double> z_max;
    std::size_t points = 2000;
    std::optional<double> gap_threshold;  // defaults to the incident normal energy
    bool include_kinetic = true;
    friend bool operator==(const LandscapeOptions&, const LandscapeOptions&) = default;
};

// Wavevectors (q, k_xi, k_zi) are given in the same unit as kappa; energies
// (v_max, detuning, energy_width) in recoil units of that kappa.
struct RunConfig {
    Command command = Command::Solve;
    Model model = Model::OneLevel;
    std::string preset;

    double kappa = 1.0;
    double big_q = 0.0;
    double v_max = 0.0;
    std::optional<double> contrast;  // absent when the fields are given explicitly
    double detuning = 0.0;
    std::optional<FieldPair> fields;

    double k_xi = 0.0;
    double k_zi = 0.0;
    InternalState state;

    ScanAxis axis = ScanAxis::None;
    GridSpec grid;
    DetuningUnit detuning_unit = DetuningUnit::Recoil;
    bool fixed_intensity = true;
    double energy_width = 0.0;
    int spread_nodes = 9;
    bool compare_models = false;  // add analytic-model columns to scan output

    std::optional<int> nu_max;
    double tolerance = 1e-6;
    std::optional<double> z_min;
    std::optional<double> z_max;
    LossModel loss_model = LossModel::AbsorbingInnerBoundary;

    LandscapeOptions landscape;

    OutputFormat format = OutputFormat::Csv;
    std::string out_path;
    unsigned jobs = 0;
    bool strict = false;

    std::vector<std::string> assumptions;

    GratingConfig grating() const;
    IncidentState incident() const;
    ProblemSpec problem() const;
    // Scan coordinates converted to the units of the scan axis (recoil frequencies for detuning).
    std::vector<double> axis_values() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ParsedConfig {
    RunConfig config;
    std::vector<std::string> defaulted;  // keys that were filled in, as "section.key = value"
    std::vector<std::string> warnings;   // unknown keys outside strict mode
};

ConfigTree read_config_file(const std::filesystem::path& path);
ConfigTree read_config_text(const std::string& text, const std::string& source = "<text>");
// Applies one "section.key=value" override.
void apply_override(ConfigTree& tree, std::string_view assignment);

// Validates every field.  Unknown keys are an error in strict mode and a warning otherwise.
ParsedConfig parse_config(const ConfigTree& tree, bool strict = false);

// Complete tree: every key is written, so parsing it back reproduces the config.
ConfigTree to_tree(const RunConfig& config);
std::string to_ini(const RunConfig& config);

std::vector<std::string> preset_names();
ConfigTree preset_tree(std::string_view name);

std::string format_double(double value);  // shortest text that reads back to the same value
std::string format_fields(const SphericalVector& field);
SphericalVector parse_field(std::string_view text);

}  // namespace ewg
