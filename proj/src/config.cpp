#include "ewg/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "ewg/errors.hpp"

namespace ewg {

namespace pt = boost::property_tree;

std::string_view to_string(Command command) {
    switch (command) {
        case Command::Solve: return "solve";
        case Command::Scan: return "scan";
        case Command::Compare: return "compare";
        case Command::Adiabatic: return "adiabatic";
    }
    return "unknown";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "records"; }

std::string_view to_string(DetuningUnit unit) { return unit == DetuningUnit::Recoil ? "recoil" : "doppler"; }

Command command_from_string(std::string_view text) {
    for (Command c : {Command::Solve, Command::Scan, Command::Compare, Command::Adiabatic})
        if (text == to_string(c)) return c;
    fail(ErrorKind::InvalidParameter, "unknown command '" + std::string(text) + "'");
}

OutputFormat output_format_from_string(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "records") return OutputFormat::Records;
    fail(ErrorKind::InvalidParameter, "unknown output format '" + std::string(text) + "'");
}

std::string format_double(double value) {
    std::array<char, 32> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), end);
}

std::vector<double> GridSpec::coordinates() const {
    if (!values.empty()) return values;
    if (points == 0) return {};
    return linear_grid(start, stop, points);
}

namespace {

constexpr std::array<std::pair<std::string_view, int>, 3> kPolarizations{{
    {"sigma-", -1},
    {"pi", 0},
    {"sigma+", 1},
}};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, const std::string& key) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value))
        fail(ErrorKind::Parse, key + ": cannot parse '" + std::string(text) + "' as a finite number");
    return value;
}

long long parse_integer(std::string_view text, const std::string& key) {
    text = trim(text);
    long long value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size())
        fail(ErrorKind::Parse, key + ": cannot parse '" + std::string(text) + "' as an integer");
    return value;
}

bool parse_bool(std::string_view text, const std::string& key) {
    text = trim(text);
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    fail(ErrorKind::Parse, key + ": expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(std::string_view text, const std::string& key) {
    std::vector<double> out;
    while (!trim(text).empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_number(text.substr(0, comma), key));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

// Known keys, in the order they are written.
const std::vector<std::pair<std::string, std::vector<std::string>>>& schema() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> keys{
        {"run", {"command", "model", "preset"}},
        {"grating", {"kappa", "q", "v_max", "contrast", "detuning", "field_plus", "field_minus"}},
        {"incident", {"k_xi", "k_zi", "state"}},
        {"scan",
         {"axis", "start", "stop", "points", "values", "detuning_unit", "fixed_intensity", "energy_width",
          "spread_nodes", "compare_models"}},
        {"solver", {"nu_max", "tolerance", "z_min", "z_max", "loss_model"}},
        {"landscape", {"z_min", "z_max", "points", "gap_threshold", "include_kinetic"}},
        {"output", {"format", "path", "jobs", "strict"}},
    };
    return keys;
}

// Reads typed values and remembers which keys fell back to a default.
class Reader {
public:
    explicit Reader(const ConfigTree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& key) const {
        const auto node = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
        if (!node) return std::nullopt;
        return std::string(trim(*node));
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (auto v = raw(key)) return *v;
        note(key, fallback);
        return fallback;
    }

    double number(const std::string& key, double fallback) {
        if (auto v = raw(key)) return parse_number(*v, key);
        note(key, format_double(fallback));
        return fallback;
    }

    double required_number(const std::string& key, const std::string& why) {
        if (auto v = raw(key)) return parse_number(*v, key);
        fail(ErrorKind::Validation, key + " is required (" + why + ")");
    }

    std::optional<double> optional_number(const std::string& key) {
        const auto v = raw(key);
        if (!v || *v == "auto") {
            if (!v) note(key, "auto");
            return std::nullopt;
        }
        return parse_number(*v, key);
    }

    long long integer(const std::string& key, long long fallback) {
        if (auto v = raw(key)) return parse_integer(*v, key);
        note(key, std::to_string(fallback));
        return fallback;
    }

    bool flag(const std::string& key, bool fallback) {
        if (auto v = raw(key)) return parse_bool(*v, key);
        note(key, fallback ? "true" : "false");
        return fallback;
    }

    template <class F>
    auto choice(const std::string& key, const std::string& fallback, F convert) {
        const std::string value = text(key, fallback);
        try {
            return convert(value);
        } catch (const Error& e) {
            fail(ErrorKind::Parse, key + ": " + e.what());
        }
    }

    std::vector<std::string> defaulted;

private:
    void note(const std::string& key, const std::string& value) { defaulted.push_back(key + " = " + value); }

    const ConfigTree& tree_;
};

void check_keys(const ConfigTree& tree, bool strict, std::vector<std::string>& warnings) {
    for (const auto& [section, body] : tree) {
        if (section == "assumptions") continue;
        const auto known = std::find_if(schema().begin(), schema().end(),
                                        [&](const auto& entry) { return entry.first == section; });
        if (!body.data().empty() || known == schema().end()) {
            const std::string msg = "unknown section '" + section + "'";
            if (strict) fail(ErrorKind::Parse, msg);
            warnings.push_back(msg);
            continue;
        }
        for (const auto& [key, value] : body) {
            if (std::find(known->second.begin(), known->second.end(), key) == known->second.end()) {
                const std::string msg = "unknown key '" + section + "." + key + "'";
                if (strict) fail(ErrorKind::Parse, msg);
                warnings.push_back(msg);
            }
        }
    }
}

void check(bool condition, const std::string& message) {
    if (!condition) fail(ErrorKind::Validation, message);
}

std::string describe(double value) { return format_double(value); }

}  // namespace

SphericalVector parse_field(std::string_view text) {
    SphericalVector field;
    bool any = false;
    while (!trim(text).empty()) {
        const auto comma = text.find(',');
        const std::string_view term = trim(text.substr(0, comma));
        const auto colon = term.find(':');
        if (colon == std::string_view::npos)
            fail(ErrorKind::Parse, "field component '" + std::string(term) + "' must read polarization:amplitude");
        const std::string_view name = trim(term.substr(0, colon));
        const auto pol = std::find_if(kPolarizations.begin(), kPolarizations.end(),
                                      [&](const auto& p) { return p.first == name; });
        if (pol == kPolarizations.end())
            fail(ErrorKind::Parse, "unknown polarization '" + std::string(name) + "' (use sigma-, pi, sigma+)");
        field[pol->second] += parse_number(term.substr(colon + 1), "field amplitude");
        any = true;
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (!any) fail(ErrorKind::Parse, "empty field specification");
    return field;
}

std::string format_fields(const SphericalVector& field) {
    std::string out;
    for (const auto& [name, q] : kPolarizations) {
        const cplx c = field[q];
        if (c == cplx{}) continue;
        if (c.imag() != 0.0)
            fail(ErrorKind::InvalidParameter, "field components with a phase cannot be written to a config");
        if (!out.empty()) out += ", ";
        out += std::string(name) + ":" + format_double(c.real());
    }
    return out.empty() ? "pi:0" : out;
}

GratingConfig RunConfig::grating() const {
    const double q = big_q / kappa;
    if (fields) return GratingConfig::from_fields(q, v_max, detuning, *fields);
    return GratingConfig::scalar(q, v_max, contrast.value_or(0.0), detuning);
}

IncidentState RunConfig::incident() const { return {k_xi / kappa, k_zi / kappa, state}; }

ProblemSpec RunConfig::problem() const {
    ProblemSpec spec;
    spec.model = model;
    spec.grating = grating();
    spec.incident = incident();
    spec.nu_max = nu_max;
    spec.solver.tolerance = tolerance;
    spec.solver.z_min = z_min;
    spec.solver.z_max = z_max;
    spec.solver.loss_model = loss_model;
    return spec;
}

std::vector<double> RunConfig::axis_values() const {
    std::vector<double> values = grid.coordinates();
    if (axis == ScanAxis::Detuning && detuning_unit == DetuningUnit::Doppler) {
        const double doppler = doppler_shift(incident(), grating());
        for (double& v : values) v *= doppler;
    }
    return values;
}

ConfigTree read_config_text(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    ConfigTree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        fail(ErrorKind::Parse, source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    return tree;
}

ConfigTree read_config_file(const std::filesystem::path& path) {
    ConfigTree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        if (e.line() == 0) fail(ErrorKind::Io, "cannot read config '" + path.string() + "': " + e.message());
        fail(ErrorKind::Parse, path.string() + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    return tree;
}

void apply_override(ConfigTree& tree, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        fail(ErrorKind::Parse, "override '" + std::string(assignment) + "' must read section.key=value");
    const std::string key(trim(assignment.substr(0, eq)));
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos)
        fail(ErrorKind::Parse, "override key '" + key + "' must read section.key");
    tree.put(pt::ptree::path_type(key, '.'), std::string(trim(assignment.substr(eq + 1))));
}

ParsedConfig parse_config(const ConfigTree& tree, bool strict) {
    ParsedConfig parsed;
    strict = strict || trim(tree.get<std::string>("output.strict", "false")) == "true";
    check_keys(tree, strict, parsed.warnings);
    Reader in(tree);
    RunConfig& c = parsed.config;

    c.command = in.choice("run.command", "solve", command_from_string);
    c.model = in.choice("run.model", "one-level", model_from_string);
    c.preset = in.raw("run.preset").value_or("");

    c.kappa = in.number("grating.kappa", 1.0);
    check(c.kappa > 0.0, "grating.kappa = " + describe(c.kappa) + " violates kappa > 0");
    c.big_q = in.required_number("grating.q", "grating wavevector");
    check(c.big_q > 0.0, "grating.q = " + describe(c.big_q) + " violates q > 0");
    c.v_max = in.required_number("grating.v_max", "potential height");
    check(c.v_max >= 0.0, "grating.v_max = " + describe(c.v_max) + " violates v_max >= 0");

    const auto plus = in.raw("grating.field_plus");
    const auto minus = in.raw("grating.field_minus");
    check(plus.has_value() == minus.has_value(), "grating.field_plus and grating.field_minus must be given together");
    if (plus) {
        check(!in.raw("grating.contrast"), "grating.contrast follows from the fields; remove it or the fields");
        try {
            c.fields = FieldPair{parse_field(*plus), parse_field(*minus)};
        } catch (const Error& e) {
            fail(ErrorKind::Parse, std::string("grating.field_plus/field_minus: ") + e.what());
        }
    } else {
        c.contrast = in.required_number("grating.contrast", "standing-wave contrast");
        check(*c.contrast >= 0.0 && *c.contrast <= 1.0,
              "grating.contrast = " + describe(*c.contrast) + " violates contrast ∈ [0,1]");
    }

    if (c.model == Model::TwoLevel) {
        c.detuning = in.required_number("grating.detuning", "the two-level model needs the laser detuning");
        check(c.detuning > 0.0, "grating.detuning = " + describe(c.detuning) + " violates detuning > 0 (blue detuning)");
    } else {
        c.detuning = in.number("grating.detuning", 0.0);
    }

    c.k_xi = in.number("incident.k_xi", 0.0);
    c.k_zi = in.required_number("incident.k_zi", "incident normal wavevector");
    check(c.k_zi > 0.0, "incident.k_zi = " + describe(c.k_zi) + " violates k_zi > 0");
    const std::string default_state = c.model == Model::Multilevel ? "m=+1/2" : "g";
    c.state = in.choice("incident.state", default_state, InternalState::from_label);
    const bool sublevel = c.state.kind == InternalState::Kind::Sublevel;
    check(sublevel == (c.model == Model::Multilevel),
          "incident.state = " + c.state.label() + " does not belong to the " + std::string(to_string(c.model)) +
              " model");
    check(c.model != Model::TwoLevel || c.state.kind == InternalState::Kind::Ground,
          "incident.state must be the ground state in the two-level model");

    c.axis = in.choice("scan.axis", "none", scan_axis_from_string);
    const auto values = in.raw("scan.values");
    const bool linear = in.raw("scan.start") || in.raw("scan.stop") || in.raw("scan.points");
    if (c.axis == ScanAxis::None) {
        check(!values && !linear, "scan grid given but scan.axis = none");
    } else if (values) {
        check(!linear, "give either scan.values or scan.start/stop/points, not both");
        c.grid.values = parse_list(*values, "scan.values");
    } else {
        c.grid.start = in.required_number("scan.start", "first grid coordinate");
        c.grid.stop = in.required_number("scan.stop", "last grid coordinate");
        const auto raw_points = in.raw("scan.points");
        check(raw_points.has_value(), "scan.points is required (number of grid points)");
        const long long points = parse_integer(*raw_points, "scan.points");
        check(points >= 0, "scan.points violates points >= 0");
        c.grid.points = static_cast<std::size_t>(points);
        check(c.grid.points != 1 || c.grid.start == c.grid.stop, "scan.points = 1 needs start = stop");
    }
    const auto coords = c.grid.coordinates();
    check(std::adjacent_find(coords.begin(), coords.end(), std::greater_equal<>()) == coords.end(),
          "scan grid must be strictly increasing");
    if (c.axis == ScanAxis::Contrast) {
        check(!c.fields, "a contrast scan needs the scalar description (grating.contrast)");
        check(std::all_of(coords.begin(), coords.end(), [](double v) { return v >= 0.0 && v <= 1.0; }),
              "scan.values violates contrast ∈ [0,1]");
    }
    if (c.axis == ScanAxis::VelocityZ)
        check(std::all_of(coords.begin(), coords.end(), [](double v) { return v > 0.0; }),
              "scan grid violates v_zi > 0");
    if (c.axis == ScanAxis::Detuning)
        check(c.model != Model::TwoLevel || std::all_of(coords.begin(), coords.end(), [](double v) { return v > 0.0; }),
              "scan grid violates detuning > 0 (blue detuning)");
    c.detuning_unit = in.choice("scan.detuning_unit", "recoil", [](const std::string& s) {
        if (s == "recoil") return DetuningUnit::Recoil;
        if (s == "doppler") return DetuningUnit::Doppler;
        fail(ErrorKind::InvalidParameter, "unknown detuning unit '" + s + "' (use recoil or doppler)");
    });
    c.fixed_intensity = in.flag("scan.fixed_intensity", true);
    c.energy_width = in.number("scan.energy_width", 0.0);
    check(c.energy_width >= 0.0, "scan.energy_width violates energy_width >= 0");
    c.spread_nodes = static_cast<int>(in.integer("scan.spread_nodes", 9));
    check(c.spread_nodes >= 1 && c.spread_nodes <= 64, "scan.spread_nodes violates 1 <= nodes <= 64");
    c.compare_models = in.flag("scan.compare_models", false);

    if (const auto nu = in.raw("solver.nu_max"); nu && *nu != "auto") {
        const long long n = parse_integer(*nu, "solver.nu_max");
        check(n >= 1 && n <= 200, "solver.nu_max = " + *nu + " violates 1 <= nu_max <= 200");
        c.nu_max = static_cast<int>(n);
    } else if (!nu) {
        in.text("solver.nu_max", "auto");
    }
    c.tolerance = in.number("solver.tolerance", 1e-6);
    check(c.tolerance > 0.0 && c.tolerance <= 1e-3, "solver.tolerance violates tolerance ∈ (0, 1e-3]");
    c.z_min = in.optional_number("solver.z_min");
    c.z_max = in.optional_number("solver.z_max");
    if (c.z_min && c.z_max) check(*c.z_min < *c.z_max, "solver.z_min must be below solver.z_max");
    c.loss_model = in.choice("solver.loss_model", "absorbing-inner-boundary", loss_model_from_string);

    c.landscape.z_min = in.optional_number("landscape.z_min");
    c.landscape.z_max = in.optional_number("landscape.z_max");
    if (c.landscape.z_min && c.landscape.z_max)
        check(*c.landscape.z_min < *c.landscape.z_max, "landscape.z_min must be below landscape.z_max");
    const long long landscape_points = in.integer("landscape.points", 2000);
    check(landscape_points >= 3, "landscape.points violates points >= 3");
    c.landscape.points = static_cast<std::size_t>(landscape_points);
    c.landscape.gap_threshold = in.optional_number("landscape.gap_threshold");
    if (c.landscape.gap_threshold) check(*c.landscape.gap_threshold > 0.0, "landscape.gap_threshold violates > 0");
    c.landscape.include_kinetic = in.flag("landscape.include_kinetic", true);

    c.format = in.choice("output.format", "csv", output_format_from_string);
    c.out_path = in.raw("output.path").value_or("");
    const long long jobs = in.integer("output.jobs", 0);
    check(jobs >= 0, "output.jobs violates jobs >= 0");
    c.jobs = static_cast<unsigned>(jobs);
    c.strict = in.flag("output.strict", false);

    if (const auto a = tree.get_child_optional("assumptions"))
        for (const auto& [key, value] : *a) c.assumptions.push_back(value.data());

    if (c.command == Command::Scan) check(c.axis != ScanAxis::None, "run.command = scan needs scan.axis");
    else check(c.axis == ScanAxis::None, "run.command = " + std::string(to_string(c.command)) + " takes no scan axis");

    // Module-level validation of the assembled physics.
    try {
        const GratingConfig g = c.grating();
        const IncidentState inc = c.incident();
        inc.validate();
        if (c.model == Model::TwoLevel) check(g.v_max() > 0.0, "grating.v_max violates v_max > 0 in the two-level model");
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Validation) throw;
        fail(ErrorKind::Validation, e.what());
    }

    parsed.defaulted = std::move(in.defaulted);
    return parsed;
}

ConfigTree to_tree(const RunConfig& c) {
    ConfigTree tree;
    auto put = [&](const std::string& key, const std::string& value) {
        tree.put(pt::ptree::path_type(key, '.'), value);
    };
    auto num = [](double v) { return format_double(v); };
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("auto"); };
    auto flag = [](bool b) { return std::string(b ? "true" : "false"); };

    put("run.command", std::string(to_string(c.command)));
    put("run.model", std::string(to_string(c.model)));
    if (!c.preset.empty()) put("run.preset", c.preset);

    put("grating.kappa", num(c.kappa));
    put("grating.q", num(c.big_q));
    put("grating.v_max", num(c.v_max));
    if (c.contrast) put("grating.contrast", num(*c.contrast));
    put("grating.detuning", num(c.detuning));
    if (c.fields) {
        put("grating.field_plus", format_fields(c.fields->plus));
        put("grating.field_minus", format_fields(c.fields->minus));
    }

    put("incident.k_xi", num(c.k_xi));
    put("incident.k_zi", num(c.k_zi));
    put("incident.state", c.state.label());

    put("scan.axis", std::string(to_string(c.axis)));
    if (c.axis != ScanAxis::None) {
        if (!c.grid.values.empty()) {
            put("scan.values", join(c.grid.values));
        } else {
            put("scan.start", num(c.grid.start));
            put("scan.stop", num(c.grid.stop));
            put("scan.points", std::to_string(c.grid.points));
        }
    }
    put("scan.detuning_unit", std::string(to_string(c.detuning_unit)));
    put("scan.fixed_intensity", flag(c.fixed_intensity));
    put("scan.energy_width", num(c.energy_width));
    put("scan.spread_nodes", std::to_string(c.spread_nodes));
    put("scan.compare_models", flag(c.compare_models));

    put("solver.nu_max", c.nu_max ? std::to_string(*c.nu_max) : "auto");
    put("solver.tolerance", num(c.tolerance));
    put("solver.z_min", opt(c.z_min));
    put("solver.z_max", opt(c.z_max));
    put("solver.loss_model", std::string(to_string(c.loss_model)));

    put("landscape.z_min", opt(c.landscape.z_min));
    put("landscape.z_max", opt(c.landscape.z_max));
    put("landscape.points", std::to_string(c.landscape.points));
    put("landscape.gap_threshold", opt(c.landscape.gap_threshold));
    put("landscape.include_kinetic", flag(c.landscape.include_kinetic));

    put("output.format", std::string(to_string(c.format)));
    if (!c.out_path.empty()) put("output.path", c.out_path);
    put("output.jobs", std::to_string(c.jobs));
    put("output.strict", flag(c.strict));

    for (std::size_t i = 0; i < c.assumptions.size(); ++i)
        tree.put_child(pt::ptree::path_type("assumptions." + std::to_string(i + 1), '.'),
                       ConfigTree(c.assumptions[i]));
    return tree;
}

std::string to_ini(const RunConfig& config) {
    std::ostringstream out;
    pt::write_ini(out, to_tree(config));
    return out.str();
}

std::vector<std::string> preset_names() { return {"fig2", "fig5", "fig6"}; }

ConfigTree preset_tree(std::string_view name) {
    if (name == "fig2") {
        return read_config_text(R"([run]
command = scan
model = one-level
preset = fig2
[grating]
q = 1
v_max = 1600
contrast = 0
[incident]
k_xi = 0
k_zi = 20
[scan]
axis = contrast
values = 0.025, 0.05, 0.1, 0.15, 0.2
compare_models = true
[solver]
loss_model = hard-truncation
[assumptions]
1 = normal incidence with k_zi = 20 kappa (assumed)
2 = modulation indices u = eps k_zi = 0.5, 1, 2, 3, 4 (assumed)
3 = Q = kappa and v_max = 4 E_zi, deep enough that the barrier acts as a hard mirror
)", "preset fig2");
    }
    if (name == "fig5") {
        return read_config_text(R"([run]
command = scan
model = two-level
preset = fig5
[grating]
q = 1
v_max = 6520
contrast = 0.5
detuning = 13040
[incident]
k_xi = 3260
k_zi = 57.09640969448079
[scan]
axis = detuning
detuning_unit = doppler
values = 0.5, 1, 1.5, 2, 2.5, 3, 4, 6, 8, 12, 20
fixed_intensity = true
energy_width = 326
spread_nodes = 5
[assumptions]
1 = Q = kappa with k_xi = 3260 kappa, giving a Doppler shift 2 Q k_xi = 6520 recoil frequencies
2 = fixed laser intensity with v_max = delta_D at delta = 2 delta_D, so the light shift is about hbar delta_D
3 = contrast 0.5 (assumed)
4 = incident normal energy delta_D / 2, k_zi^2 = 3260 (assumed)
5 = Gaussian energy spread of width 0.1 E_zi on 5 nodes (assumed)
)", "preset fig5");
    }
    if (name == "fig6") {
        return read_config_text(R"([run]
command = scan
model = multilevel-j12
preset = fig6
[grating]
q = 1
v_max = 20100
detuning = 0
field_plus = pi:0.02449489742783178
field_minus = sigma-:1
[incident]
k_xi = 201
k_zi = 20
state = m=+1/2
[scan]
axis = v_zi
start = 8
stop = 60
points = 53
compare_models = true
[solver]
nu_max = 2
[assumptions]
1 = TE wave pi-polarized and TM wave pure sigma-, TE/TM intensity ratio 6e-4
2 = Doppler shift delta_D = 402 recoil frequencies with Q = kappa and k_xi = 201 kappa (assumed)
3 = v_max = 50 delta_D (assumed)
4 = coupled-wave basis nu_max = 2 (orders 0 and -2 carry the Raman transition)
)", "preset fig6");
    }
    fail(ErrorKind::InvalidParameter, "unknown preset '" + std::string(name) + "' (fig2, fig5, fig6)");
}

}  // namespace ewg
