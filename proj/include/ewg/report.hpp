#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ewg/config.hpp"

namespace ewg {

using Json = nlohmann::ordered_json;

// Empty cells stand for values a model could not provide at that row.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);  // must match the column count
    std::size_t column(const std::string& name) const;
};

std::string code_version();

// Run metadata: the complete config, the keys that were defaulted, warnings and the code version.
Json run_metadata(const ParsedConfig& parsed);
// Reads the config back out of a metadata header.
RunConfig config_from_metadata(const Json& metadata);

// Header row then one line per row.  Doubles use the shortest round-trip form,
// fields containing separators or quotes are quoted.
void write_csv(std::ostream& out, const Table& table);
// One JSON object per line: the metadata header first, then one record per row
// with the column names as keys and the table name under "table".
void write_records(std::ostream& out, const std::vector<Table>& tables, const Json& metadata);

// Writes every table in the chosen format.  With a path, CSV tables after the
// first go to sibling files named <stem>.<table name>.csv; without one
// everything goes to `console`, tables separated by a blank line.
std::vector<std::filesystem::path> emit_results(const std::vector<Table>& tables, OutputFormat format,
                                                const Json& metadata, const std::string& path,
                                                std::ostream& console);

}  // namespace ewg
