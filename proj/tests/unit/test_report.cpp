#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "ewg/errors.hpp"
#include "ewg/report.hpp"

using namespace ewg;

namespace {

ParsedConfig minimal_parsed() {
    return parse_config(read_config_text("[grating]\nq = 0.8\nv_max = 800\ncontrast = 0.01\n[incident]\nk_zi = 20\n"));
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("table rows must match the header") {
    Table t{"results", {"a", "b"}, {}};
    t.add_row({1.0, std::string("x")});
    CHECK_THROWS_AS(t.add_row({1.0}), Error);
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(t.column("c"), Error);
}

TEST_CASE("CSV output") {
    Table t{"results", {"index", "value", "note"}, {}};
    t.add_row({0LL, 0.1, std::string("plain")});
    t.add_row({1LL, Cell{}, std::string("needs, \"quotes\"")});
    t.add_row({2LL, 57.09640969448079, std::string("")});
    std::ostringstream out;
    write_csv(out, t);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "index,value,note");
    CHECK(lines[1] == "0,0.1,plain");
    CHECK(lines[2] == "1,,\"needs, \"\"quotes\"\"\"");
    CHECK(lines[3] == "2,57.09640969448079,");
}

TEST_CASE("empty table gives a header-only CSV") {
    Table t{"results", {"index", "p[0]"}, {}};
    std::ostringstream out;
    write_csv(out, t);
    CHECK(out.str() == "index,p[0]\n");
}

TEST_CASE("records carry the metadata header and reproduce the config") {
    const ParsedConfig parsed = minimal_parsed();
    const Json meta = run_metadata(parsed);
    CHECK(meta["type"] == "metadata");
    CHECK(meta["code_version"] == code_version());
    CHECK_FALSE(meta["defaulted"].empty());

    Table t{"results", {"index", "p[0]", "message"}, {}};
    t.add_row({0LL, 0.5, Cell{}});
    t.add_row({1LL, std::numeric_limits<double>::infinity(), std::string("x")});
    std::ostringstream out;
    write_records(out, {t}, meta);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 3);
    const Json header = Json::parse(lines[0]);
    CHECK(config_from_metadata(header) == parsed.config);
    const Json row0 = Json::parse(lines[1]);
    CHECK(row0["type"] == "row");
    CHECK(row0["table"] == "results");
    CHECK(row0["p[0]"] == 0.5);
    CHECK(row0["message"].is_null());
    CHECK(Json::parse(lines[2])["p[0]"] == "inf");
    // Key order follows the column order.
    CHECK(lines[1].find("\"index\"") < lines[1].find("\"p[0]\""));

    CHECK_THROWS_AS(config_from_metadata(Json::object()), Error);
}

TEST_CASE("emitting to files") {
    const auto dir = std::filesystem::temp_directory_path() / "ewg_test_report";
    std::filesystem::create_directories(dir);
    Table results{"results", {"index"}, {}};
    results.add_row({0LL});
    Table crossings{"crossings", {"z_c"}, {}};
    crossings.add_row({1.5});
    const Json meta = run_metadata(minimal_parsed());
    std::ostringstream console;

    const auto written = emit_results({results, crossings}, OutputFormat::Csv, meta, (dir / "out.csv").string(), console);
    REQUIRE(written.size() == 2);
    CHECK(written[1].filename() == "out.crossings.csv");
    CHECK(console.str().empty());
    std::ifstream side(written[1]);
    std::string header;
    std::getline(side, header);
    CHECK(header == "z_c");

    emit_results({results, crossings}, OutputFormat::Csv, meta, "", console);
    CHECK(console.str() == "index\n0\n\nz_c\n1.5\n");

    const Error e = [&] {
        try {
            emit_results({results}, OutputFormat::Csv, meta, (dir / "missing" / "x.csv").string(), console);
        } catch (const Error& err) {
            return err;
        }
        return Error(ErrorKind::InvalidParameter, "none");
    }();
    CHECK(e.kind() == ErrorKind::Io);
    std::filesystem::remove_all(dir);
}
