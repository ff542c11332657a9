#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <variant>

#include "ewg/errors.hpp"
#include "ewg/runner.hpp"

using namespace ewg;

namespace {

const char* small_ini = R"([grating]
q = 1
v_max = 400
contrast = 0.2
[incident]
k_zi = 6
[solver]
nu_max = 6
)";

ParsedConfig parse_text(const std::string& text) { return parse_config(read_config_text(text)); }

RunConfig with(const std::vector<std::string>& overrides, const std::string& base = small_ini) {
    auto tree = read_config_text(base);
    for (const auto& o : overrides) apply_override(tree, o);
    return parse_config(tree).config;
}

double number(const Table& t, std::size_t row, const std::string& column) {
    const auto* v = std::get_if<double>(&t.rows.at(row).at(t.column(column)));
    REQUIRE(v != nullptr);
    return *v;
}

std::string text(const Table& t, std::size_t row, const std::string& column) {
    const auto* v = std::get_if<std::string>(&t.rows.at(row).at(t.column(column)));
    REQUIRE(v != nullptr);
    return *v;
}

std::string csv_of(const Table& t) {
    std::ostringstream out;
    write_csv(out, t);
    return out.str();
}

}  // namespace

TEST_CASE("channel column names") {
    CHECK(channel_column(Model::OneLevel, 2, InternalState::ground()) == "p[2]");
    CHECK(channel_column(Model::OneLevel, -4, InternalState::ground(), "tpga") == "tpga[-4]");
    CHECK(channel_column(Model::Multilevel, -2, InternalState::sublevel(-1)) == "p[-2:m=-1/2]");
}

TEST_CASE("strict exit code") {
    RunOutcome clean;
    CHECK(clean.exit_code(true) == 0);
    RunOutcome failed;
    failed.failures = 1;
    CHECK(failed.exit_code(false) == 0);
    CHECK(failed.exit_code(true) == 1);
    RunOutcome flagged;
    flagged.flagged = 2;
    CHECK(flagged.exit_code(true) == 1);
}

TEST_CASE("single solve produces one results row") {
    const RunOutcome out = execute(parse_text(small_ini).config);
    REQUIRE(out.tables.size() == 1);
    const Table& t = out.tables[0];
    CHECK(t.name == "results");
    REQUIRE(t.rows.size() == 1);
    CHECK(out.rows == 1);
    CHECK(out.failures == 0);
    CHECK(out.flagged == 0);
    CHECK(text(t, 0, "status") == "ok");
    CHECK(text(t, 0, "model") == "one-level");
    CHECK(std::abs(number(t, 0, "flux_sum") - 1.0) < 1e-6);
    CHECK(number(t, 0, "p[2]") == doctest::Approx(number(t, 0, "p[-2]")).epsilon(1e-6));
    CHECK(number(t, 0, "doppler_shift") == 0.0);
    CHECK(number(t, 0, "normal_energy") == 36.0);
    for (const char* col : {"modulation_index", "thin_grating_ratio", "delta_kz_plus", "delta_kz_minus"})
        CHECK_NOTHROW(t.column(col));
    CHECK(out.summary.find("solve (one-level): 1 rows, 0 failed, 0 flagged") != std::string::npos);
    CHECK(out.summary.find("top channels: p[0]") != std::string::npos);
}

TEST_CASE("scan keeps grid order and reports failed points per row") {
    // A wide energy spread reaches negative energies for the slowest atoms only.
    const RunConfig c = with({"run.command=scan", "scan.axis=v_zi", "scan.values=2, 6, 8", "scan.energy_width=10",
                              "scan.spread_nodes=5"});
    const RunOutcome out = execute(c);
    const Table& t = out.tables.at(0);
    REQUIRE(t.rows.size() == 3);
    CHECK(number(t, 0, "v_zi") == 2.0);
    CHECK(number(t, 2, "v_zi") == 8.0);
    CHECK(text(t, 0, "status") == "error");
    CHECK(text(t, 0, "message").find("invalid") != std::string::npos);
    CHECK(std::holds_alternative<std::monostate>(t.rows[0][t.column("flux_sum")]));
    CHECK(text(t, 1, "status") == "ok");
    CHECK(text(t, 2, "status") == "ok");
    CHECK(out.failures == 1);
    CHECK(out.exit_code(false) == 0);
    CHECK(out.exit_code(true) == 1);
    REQUIRE_FALSE(out.messages.empty());
    CHECK(out.messages[0].rfind("v_zi = 2: ", 0) == 0);
}

TEST_CASE("scans are reproducible and independent of the thread count") {
    const RunConfig serial = with({"run.command=scan", "scan.axis=contrast", "scan.start=0", "scan.stop=0.3",
                                   "scan.points=4", "output.jobs=1"});
    const RunConfig parallel = with({"run.command=scan", "scan.axis=contrast", "scan.start=0", "scan.stop=0.3",
                                     "scan.points=4", "output.jobs=4"});
    const std::string a = csv_of(execute(serial).tables.at(0));
    CHECK(a == csv_of(execute(serial).tables.at(0)));
    CHECK(a == csv_of(execute(parallel).tables.at(0)));
}

TEST_CASE("empty scan grid gives a header-only table") {
    const RunOutcome out =
        execute(with({"run.command=scan", "scan.axis=v_zi", "scan.start=1", "scan.stop=2", "scan.points=0"}));
    const Table& t = out.tables.at(0);
    CHECK(t.rows.empty());
    CHECK_FALSE(t.columns.empty());
    CHECK(out.exit_code(true) == 0);
}

TEST_CASE("analytic model columns next to the coupled-wave result") {
    const RunOutcome out = execute(with({"scan.compare_models=true"}));
    const Table& t = out.tables.at(0);
    CHECK(number(t, 0, "tpga[2]") > 0.0);
    CHECK(number(t, 0, "dwba[2]") > 0.0);
    CHECK(number(t, 0, "tpga[2]") == doctest::Approx(number(t, 0, "tpga[-2]")));
}

TEST_CASE("compare command") {
    const RunOutcome out = execute(with({"run.command=compare"}));
    const Table& t = out.tables.at(0);
    CHECK(t.name == "compare");
    const std::vector<std::string> expected{"order", "state", "coupled_wave", "dwba", "tpga", "rel_dev_dwba",
                                            "rel_dev_tpga"};
    CHECK(t.columns == expected);
    // k = 6, Q = 1: orders +-6 sit exactly at threshold, so |order| <= 4 are open.
    CHECK(t.rows.size() == 5);
    CHECK(out.rows == 5);

    auto two = read_config_text(small_ini);
    apply_override(two, "run.command=compare");
    apply_override(two, "run.model=two-level");
    apply_override(two, "grating.detuning=100");
    const RunConfig two_level = parse_config(two).config;
    try {
        execute(two_level);
        FAIL("two-level compare must be rejected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfModel);
    }
}

TEST_CASE("adiabatic command emits the surfaces and the crossing list") {
    const RunOutcome out = execute(with({"run.command=adiabatic", "landscape.points=50"}));
    REQUIRE(out.tables.size() == 2);
    const Table& surfaces = out.tables[0];
    CHECK(surfaces.name == "landscape");
    // Grid points are added where the sorted surfaces come close.
    CHECK(surfaces.rows.size() >= 50);
    CHECK(surfaces.columns.front() == "z");
    CHECK(surfaces.columns.size() == 1 + 7);
    for (std::size_t i = 1; i < surfaces.rows.size(); ++i) CHECK(number(surfaces, i, "z") > number(surfaces, i - 1, "z"));
    CHECK(out.tables[1].name == "crossings");
    CHECK(out.tables[1].columns == std::vector<std::string>{"z_c", "channel_a", "channel_b", "gap", "slope_diff"});
}

TEST_CASE("run writes tables to the console and the summary to the log") {
    std::ostringstream console, log;
    const ParsedConfig parsed = parse_text(std::string(small_ini) + "colour = blue\n");
    CHECK(run(parsed, console, log) == 0);
    CHECK(console.str().rfind("index,model,status", 0) == 0);
    CHECK(log.str().find("warning: unknown key") != std::string::npos);
    CHECK(log.str().find("1 rows, 0 failed") != std::string::npos);
}
