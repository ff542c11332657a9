#include "ewg/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ewg/errors.hpp"

#ifndef EWG_VERSION
#define EWG_VERSION "unversioned"
#endif

namespace ewg {

void Table::add_row(std::vector<Cell> row) {
    require(row.size() == columns.size(), ErrorKind::InvalidParameter,
            "row of " + std::to_string(row.size()) + " cells for " + std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& column_name) const {
    const auto it = std::find(columns.begin(), columns.end(), column_name);
    require(it != columns.end(), ErrorKind::InvalidParameter, "no column '" + column_name + "' in " + name);
    return static_cast<std::size_t>(it - columns.begin());
}

std::string code_version() { return EWG_VERSION; }

namespace {

Json tree_to_json(const ConfigTree& tree) {
    Json out = Json::object();
    for (const auto& [section, body] : tree) {
        auto& node = out[section];
        node = Json::object();
        for (const auto& [key, value] : body) node[key] = value.data();
    }
    return out;
}

}  // namespace

Json run_metadata(const ParsedConfig& parsed) {
    Json meta;
    meta["type"] = "metadata";
    meta["code_version"] = code_version();
    meta["config"] = tree_to_json(to_tree(parsed.config));
    meta["defaulted"] = parsed.defaulted;
    meta["warnings"] = parsed.warnings;
    meta["assumptions"] = parsed.config.assumptions;
    return meta;
}

RunConfig config_from_metadata(const Json& metadata) {
    require(metadata.contains("config") && metadata["config"].is_object(), ErrorKind::Parse,
            "metadata has no config object");
    ConfigTree tree;
    for (const auto& [section, body] : metadata["config"].items()) {
        require(body.is_object(), ErrorKind::Parse, "metadata config section '" + section + "' is not an object");
        ConfigTree node;
        for (const auto& [key, value] : body.items()) {
            require(value.is_string(), ErrorKind::Parse, "metadata value " + section + "." + key + " is not text");
            node.push_back({key, ConfigTree(value.get<std::string>())});
        }
        tree.push_back({section, node});
    }
    return parse_config(tree, true).config;
}

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + '"';
}

std::string cell_text(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else return v;
        },
        cell);
}

Json cell_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return format_double(v);
                return v;
            } else return v;
        },
        cell);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
        out << '\n';
    }
}

void write_records(std::ostream& out, const std::vector<Table>& tables, const Json& metadata) {
    out << metadata.dump() << '\n';
    for (const auto& table : tables) {
        for (const auto& row : table.rows) {
            Json record;
            record["type"] = "row";
            record["table"] = table.name;
            for (std::size_t i = 0; i < row.size(); ++i) record[table.columns[i]] = cell_json(row[i]);
            out << record.dump() << '\n';
        }
    }
}

std::vector<std::filesystem::path> emit_results(const std::vector<Table>& tables, OutputFormat format,
                                                const Json& metadata, const std::string& path,
                                                std::ostream& console) {
    std::vector<std::filesystem::path> written;
    auto open = [&](const std::filesystem::path& p) {
        std::ofstream file(p, std::ios::binary);
        require(file.good(), ErrorKind::Io, "cannot open '" + p.string() + "' for writing");
        written.push_back(p);
        return file;
    };
    auto finish = [](std::ofstream& file, const std::filesystem::path& p) {
        file.flush();
        require(file.good(), ErrorKind::Io, "write to '" + p.string() + "' failed");
    };

    if (format == OutputFormat::Records) {
        if (path.empty()) {
            write_records(console, tables, metadata);
        } else {
            auto file = open(path);
            write_records(file, tables, metadata);
            finish(file, path);
        }
        return written;
    }

    for (std::size_t t = 0; t < tables.size(); ++t) {
        if (path.empty()) {
            if (t > 0) console << '\n';
            write_csv(console, tables[t]);
            continue;
        }
        std::filesystem::path target(path);
        if (t > 0) target.replace_filename(target.stem().string() + "." + tables[t].name + ".csv");
        auto file = open(target);
        write_csv(file, tables[t]);
        finish(file, target);
    }
    return written;
}

}  // namespace ewg
