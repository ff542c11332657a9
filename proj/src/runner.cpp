#include "ewg/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "ewg/adiabatic.hpp"
#include "ewg/errors.hpp"
#include "ewg/scalar_models.hpp"
#include "ewg/semiclassical.hpp"

namespace ewg {

int RunOutcome::exit_code(bool strict) const { return strict && (failures > 0 || flagged > 0) ? 1 : 0; }

std::string channel_column(Model model, int order, InternalState internal, const std::string& prefix) {
    std::string name = prefix + "[" + std::to_string(order);
    if (model != Model::OneLevel) name += ":" + internal.label();
    return name + "]";
}

namespace {

using ChannelKey = std::pair<int, InternalState>;

struct PointResult {
    double coordinate = 0.0;
    double axis_value = 0.0;
    ProblemSpec spec;
    std::optional<DiffractionPattern> pattern;
    std::optional<Error> error;
};

std::string axis_column(const RunConfig& c) {
    if (c.axis == ScanAxis::Detuning && c.detuning_unit == DetuningUnit::Doppler) return "detuning/doppler";
    return std::string(to_string(c.axis));
}

std::size_t crossing_count(const ProblemSpec& spec, const DiffractionPattern& pattern) {
    const ChannelSet channels =
        build_channels(spec.incident, spec.grating, pattern.nu_max, spec.model);
    const CouplingMatrixField field = coupling_field(spec.model, spec.grating, channels);
    const auto landscape = adiabatic_landscape(field, uniform_grid(pattern.z_min, pattern.z_max, 400));
    return find_avoided_crossings(landscape, spec.incident.normal_energy()).size();
}

// Analytic-model columns for one row; missing values stay empty.
class ModelColumns {
public:
    ModelColumns(const RunConfig& config, const std::vector<ChannelKey>& keys) : model_(config.model) {
        if (!config.compare_models) return;
        if (model_ == Model::OneLevel) {
            for (const auto& [order, internal] : keys) names_.push_back(channel_column(model_, order, internal, "tpga"));
            names_.push_back("dwba[-2]");
            names_.push_back("dwba[2]");
            tpga_orders_ = keys;
        } else if (model_ == Model::Multilevel) {
            names_ = {"lz_michelson[-2:m=-1/2]", "raman_dwba[-2:m=-1/2]", "lz_exponent", "z_c"};
        }
    }

    const std::vector<std::string>& names() const { return names_; }

    std::vector<Cell> evaluate(const ProblemSpec& spec) const {
        std::vector<Cell> cells(names_.size());
        if (names_.empty()) return cells;
        if (model_ == Model::OneLevel) {
            int n_max = 0;
            for (const auto& key : tpga_orders_) n_max = std::max(n_max, std::abs(key.first) / 2);
            const auto tpga = tpga_prediction(spec.grating, spec.incident, n_max);
            for (std::size_t i = 0; i < tpga_orders_.size(); ++i)
                if (tpga_orders_[i].first % 2 == 0) cells[i] = tpga.probability(tpga_orders_[i].first);
            try {
                const auto dwba = dwba_first_order(spec.grating, spec.incident);
                cells[tpga_orders_.size()] = dwba.probability(-2);
                cells[tpga_orders_.size() + 1] = dwba.probability(2);
            } catch (const Error&) {
            }
        } else {
            try {
                const auto m = michelson_diffraction(spec.grating, spec.incident);
                cells[0] = m.diffracted;
                cells[2] = m.node.lz_exponent;
                cells[3] = raman_pair(spec.grating, spec.incident).crossing_position();
            } catch (const Error&) {
            }
            try {
                cells[1] = raman_dwba(spec.grating, spec.incident);
            } catch (const Error&) {
            }
        }
        return cells;
    }

private:
    Model model_;
    std::vector<std::string> names_;
    std::vector<ChannelKey> tpga_orders_;
};

std::vector<PointResult> evaluate_points(const RunConfig& config) {
    const ProblemSpec base = config.problem();
    std::vector<PointResult> points;
    if (config.axis == ScanAxis::None) {
        PointResult p;
        p.spec = base;
        try {
            p.pattern = solve_with_energy_spread(base, config.energy_width, config.spread_nodes);
        } catch (const Error& e) {
            p.error = e;
        }
        points.push_back(std::move(p));
        return points;
    }

    const std::vector<double> coords = config.grid.coordinates();
    const std::vector<double> values = config.axis_values();
    ScanOptions options;
    options.jobs = config.jobs;
    options.energy_width = config.energy_width;
    options.spread_nodes = config.spread_nodes;
    options.fixed_intensity = config.fixed_intensity;
    auto scanned = scan(base, config.axis, values, options);
    for (std::size_t i = 0; i < scanned.size(); ++i) {
        PointResult p;
        p.coordinate = coords[i];
        p.axis_value = values[i];
        p.spec = at_coordinate(base, config.axis, values[i], config.fixed_intensity);
        p.pattern = std::move(scanned[i].pattern);
        p.error = std::move(scanned[i].error);
        points.push_back(std::move(p));
    }
    return points;
}

std::string describe_point(const RunConfig& config, const PointResult& p) {
    if (config.axis == ScanAxis::None) return "solve";
    return axis_column(config) + " = " + format_double(p.coordinate);
}

Table results_table(const RunConfig& config, const std::vector<PointResult>& points, RunOutcome& outcome) {
    std::vector<ChannelKey> keys;
    for (const auto& p : points)
        if (p.pattern)
            for (const auto& ch : p.pattern->channels) keys.emplace_back(ch.order, ch.internal);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    const ModelColumns models(config, keys);
    if (config.compare_models && models.names().empty())
        outcome.messages.push_back("no analytic models are available for the two-level model");

    Table table;
    table.name = "results";
    table.columns = {"index"};
    if (config.axis != ScanAxis::None) table.columns.push_back(axis_column(config));
    if (config.axis == ScanAxis::Detuning && config.detuning_unit == DetuningUnit::Doppler)
        table.columns.push_back("detuning");
    for (const char* name : {"model", "status", "message", "flux_sum", "flux_flag", "loss", "nonspecular",
                             "error_estimate", "amplitude_error", "nu_max", "truncation_change", "steps", "z_min",
                             "z_max"})
        table.columns.emplace_back(name);
    for (const auto& [order, internal] : keys) table.columns.push_back(channel_column(config.model, order, internal));
    table.columns.emplace_back("doppler_shift");
    table.columns.emplace_back("normal_energy");
    if (config.model == Model::OneLevel) {
        for (const char* name : {"modulation_index", "thin_grating_ratio", "delta_kz_plus", "delta_kz_minus"})
            table.columns.emplace_back(name);
    } else {
        table.columns.emplace_back("crossings");
    }
    for (const auto& name : models.names()) table.columns.push_back(name);

    for (std::size_t i = 0; i < points.size(); ++i) {
        const PointResult& p = points[i];
        std::vector<Cell> row{static_cast<long long>(i)};
        if (config.axis != ScanAxis::None) row.emplace_back(p.coordinate);
        if (config.axis == ScanAxis::Detuning && config.detuning_unit == DetuningUnit::Doppler)
            row.emplace_back(p.axis_value);
        row.emplace_back(std::string(to_string(config.model)));

        if (p.pattern) {
            const DiffractionPattern& d = *p.pattern;
            const bool flux_off = !(std::abs(d.flux_sum - 1.0) <= config.tolerance);
            const bool unconverged = d.truncation_change && !(*d.truncation_change < config.tolerance);
            if (flux_off)
                outcome.messages.push_back(describe_point(config, p) + ": flux sum " + format_double(d.flux_sum) +
                                           " misses 1 by more than the tolerance");
            if (unconverged)
                outcome.messages.push_back(describe_point(config, p) + ": raising nu_max to " +
                                           std::to_string(d.nu_max) + " still changed the probabilities by " +
                                           format_double(*d.truncation_change));
            if (flux_off || unconverged) ++outcome.flagged;
            row.emplace_back(std::string("ok"));
            row.emplace_back(std::string());
            row.emplace_back(d.flux_sum);
            row.emplace_back(static_cast<long long>(flux_off));
            row.emplace_back(d.loss);
            row.emplace_back(d.nonspecular());
            row.emplace_back(d.error_estimate);
            row.emplace_back(d.amplitude_error);
            row.emplace_back(static_cast<long long>(d.nu_max));
            row.emplace_back(d.truncation_change ? Cell{*d.truncation_change} : Cell{});
            row.emplace_back(static_cast<long long>(d.steps));
            row.emplace_back(d.z_min);
            row.emplace_back(d.z_max);
            for (const auto& [order, internal] : keys) {
                const auto idx = d.index_of(order, internal);
                row.emplace_back(idx ? Cell{d.probabilities[*idx]} : Cell{});
            }
        } else {
            ++outcome.failures;
            const std::string what = p.error ? std::string(to_string(p.error->kind())) + ": " + p.error->what()
                                             : std::string("no result");
            outcome.messages.push_back(describe_point(config, p) + ": " + what);
            row.emplace_back(std::string("error"));
            row.emplace_back(what);
            row.resize(row.size() + 11 + keys.size());
        }

        row.emplace_back(doppler_shift(p.spec.incident, p.spec.grating));
        row.emplace_back(p.spec.incident.normal_energy());
        if (config.model == Model::OneLevel) {
            const auto v = tpga_prediction(p.spec.grating, p.spec.incident, 0).validity;
            row.emplace_back(v.modulation_index);
            row.emplace_back(v.thin_grating_ratio);
            row.emplace_back(v.delta_kz_plus);
            row.emplace_back(v.delta_kz_minus);
        } else if (p.pattern) {
            try {
                row.emplace_back(static_cast<long long>(crossing_count(p.spec, *p.pattern)));
            } catch (const Error&) {
                row.emplace_back(Cell{});
            }
        } else {
            row.emplace_back(Cell{});
        }
        for (auto& cell : models.evaluate(p.spec)) row.push_back(std::move(cell));
        table.add_row(std::move(row));
    }
    outcome.rows = points.size();
    return table;
}

Table compare_table(const RunConfig& config, RunOutcome& outcome) {
    const ProblemSpec spec = config.problem();
    const DiffractionPattern cc = solve_with_energy_spread(spec, config.energy_width, config.spread_nodes);
    if (!(std::abs(cc.flux_sum - 1.0) <= config.tolerance)) {
        ++outcome.flagged;
        outcome.messages.push_back("compare: flux sum " + format_double(cc.flux_sum) +
                                   " misses 1 by more than the tolerance");
    }

    std::vector<std::string> names;
    std::vector<std::map<ChannelKey, double>> values;
    if (config.model == Model::OneLevel) {
        names = {"dwba", "tpga"};
        std::map<ChannelKey, double> dwba;
        try {
            for (const auto& [order, p] : dwba_first_order(spec.grating, spec.incident).probabilities)
                dwba[{order, InternalState::ground()}] = p;
        } catch (const Error& e) {
            outcome.messages.push_back(std::string("dwba: ") + e.what());
        }
        std::map<ChannelKey, double> tpga;
        for (const auto& [order, p] : tpga_prediction(spec.grating, spec.incident, spec.resolved_nu_max() / 2).probabilities)
            tpga[{order, InternalState::ground()}] = p;
        values = {dwba, tpga};
    } else if (config.model == Model::Multilevel) {
        names = {"lz_michelson", "raman_dwba"};
        const ChannelKey in{0, InternalState::sublevel(1)};
        const ChannelKey out{-2, InternalState::sublevel(-1)};
        std::map<ChannelKey, double> lz;
        try {
            const auto m = michelson_diffraction(spec.grating, spec.incident);
            lz[in] = m.specular;
            lz[out] = m.diffracted;
        } catch (const Error& e) {
            outcome.messages.push_back(std::string("lz_michelson: ") + e.what());
        }
        std::map<ChannelKey, double> born;
        try {
            born[out] = raman_dwba(spec.grating, spec.incident);
        } catch (const Error& e) {
            outcome.messages.push_back(std::string("raman_dwba: ") + e.what());
        }
        values = {lz, born};
    } else {
        fail(ErrorKind::OutOfModel, "compare needs the one-level or the multilevel model");
    }

    Table table;
    table.name = "compare";
    table.columns = {"order", "state", "coupled_wave"};
    for (const auto& n : names) table.columns.push_back(n);
    for (const auto& n : names) table.columns.push_back("rel_dev_" + n);
    for (std::size_t i = 0; i < cc.channels.size(); ++i) {
        const Channel& ch = cc.channels[i];
        if (!ch.open) continue;
        const double p = cc.probabilities[i];
        std::vector<Cell> row{static_cast<long long>(ch.order), ch.internal.label(), p};
        std::vector<Cell> deviations;
        for (const auto& v : values) {
            const auto it = v.find({ch.order, ch.internal});
            if (it == v.end()) {
                row.emplace_back(Cell{});
                deviations.emplace_back(Cell{});
                continue;
            }
            row.emplace_back(it->second);
            deviations.emplace_back(p > 0.0 ? Cell{(it->second - p) / p} : Cell{});
        }
        for (auto& d : deviations) row.push_back(std::move(d));
        table.add_row(std::move(row));
    }
    outcome.rows = table.rows.size();
    return table;
}

std::vector<Table> landscape_tables(const RunConfig& config, RunOutcome& outcome) {
    const ProblemSpec spec = config.problem();
    const ChannelSet channels = build_channels(spec.incident, spec.grating, spec.resolved_nu_max(), spec.model);
    const CouplingMatrixField field = coupling_field(spec.model, spec.grating, channels);
    const IntegrationWindow window = default_window(field, spec.incident);
    const double z_min = config.landscape.z_min.value_or(window.z_min);
    const double z_max = config.landscape.z_max.value_or(window.z_max);
    const auto landscape =
        adiabatic_landscape(field, uniform_grid(z_min, z_max, config.landscape.points), config.landscape.include_kinetic);
    const double threshold = config.landscape.gap_threshold.value_or(spec.incident.normal_energy());
    const auto crossings = find_avoided_crossings(landscape, threshold);

    Table surfaces;
    surfaces.name = "landscape";
    surfaces.columns = {"z"};
    for (std::size_t label : landscape.labels) surfaces.columns.push_back("W[" + channels[label].label() + "]");
    for (std::size_t i = 0; i < landscape.z_grid.size(); ++i) {
        std::vector<Cell> row{landscape.z_grid[i]};
        for (const auto& track : landscape.surfaces) row.emplace_back(track[i]);
        surfaces.add_row(std::move(row));
    }

    Table list;
    list.name = "crossings";
    list.columns = {"z_c", "channel_a", "channel_b", "gap", "slope_diff"};
    for (const auto& c : crossings)
        list.add_row({c.z_c, channels[c.surface_pair[0]].label(), channels[c.surface_pair[1]].label(), c.gap,
                      c.slope_diff});
    outcome.rows = surfaces.rows.size();
    return {surfaces, list};
}

std::string summary_text(const RunConfig& config, const RunOutcome& outcome) {
    std::ostringstream out;
    out << to_string(config.command) << " (" << to_string(config.model) << "): " << outcome.rows << " rows, "
        << outcome.failures << " failed, " << outcome.flagged << " flagged\n";
    if (outcome.tables.empty() || outcome.tables.front().name != "results") return out.str();
    const Table& t = outcome.tables.front();
    const std::size_t flux = t.column("flux_sum");
    double worst = 0.0;
    for (const auto& row : t.rows)
        if (const auto* v = std::get_if<double>(&row[flux])) worst = std::max(worst, std::abs(*v - 1.0));
    out << "largest |flux_sum - 1| = " << format_double(worst) << '\n';
    if (t.rows.size() == 1 && std::holds_alternative<double>(t.rows[0][flux])) {
        std::vector<std::pair<double, std::string>> top;
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            if (t.columns[i].rfind("p[", 0) == 0)
                if (const auto* v = std::get_if<double>(&t.rows[0][i])) top.emplace_back(*v, t.columns[i]);
        std::sort(top.begin(), top.end(), std::greater<>());
        out << "top channels:";
        for (std::size_t i = 0; i < std::min<std::size_t>(3, top.size()); ++i)
            out << ' ' << top[i].second << " = " << format_double(top[i].first);
        out << '\n';
    }
    return out.str();
}

}  // namespace

RunOutcome execute(const RunConfig& config) {
    RunOutcome outcome;
    switch (config.command) {
        case Command::Solve:
        case Command::Scan:
            outcome.tables.push_back(results_table(config, evaluate_points(config), outcome));
            break;
        case Command::Compare:
            outcome.tables.push_back(compare_table(config, outcome));
            break;
        case Command::Adiabatic:
            outcome.tables = landscape_tables(config, outcome);
            break;
    }
    outcome.summary = summary_text(config, outcome);
    return outcome;
}

int run(const ParsedConfig& parsed, std::ostream& console, std::ostream& log) {
    const RunConfig& config = parsed.config;
    for (const auto& w : parsed.warnings) log << "warning: " << w << '\n';
    const RunOutcome outcome = execute(config);
    const auto files = emit_results(outcome.tables, config.format, run_metadata(parsed), config.out_path, console);
    for (const auto& m : outcome.messages) log << "warning: " << m << '\n';
    log << outcome.summary;
    for (const auto& f : files) log << "wrote " << f.string() << '\n';
    return outcome.exit_code(config.strict);
}

}  // namespace ewg
