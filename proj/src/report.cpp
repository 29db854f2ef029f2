#include "lpres/report.hpp"

#include <cstdio>
#include <fstream>

#include "lpres/errors.hpp"

namespace lpres {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> bound_fields() {
    return {"name",       "relation",  "lhs", "rhs_terms", "rhs_total", "constant_c", "tolerance",
            "pass",       "slack",     "n",   "e_max",     "scheme",    "model",      "t"};
}

std::vector<std::string> bound_cells(const BoundReport& r) {
    std::string terms;
    for (const auto& [k, v] : r.rhs_terms) {
        if (!terms.empty()) terms += ';';
        terms += k + '=' + format_number(v);
    }
    return {r.name,
            r.relation,
            format_number(r.lhs),
            terms,
            format_number(r.rhs_total),
            format_number(r.constant_c),
            format_number(r.tolerance),
            r.pass ? "true" : "false",
            format_number(r.slack()),
            std::to_string(r.n),
            format_number(r.e_max),
            r.scheme,
            r.model,
            format_number(r.t)};
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
            out += '"';
            for (char ch : c) {
                if (ch == '"') out += '"';
                out += ch;
            }
            out += '"';
        } else {
            out += c;
        }
    }
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

} // namespace

void write_bound_csv(const std::filesystem::path& path, const std::vector<BoundReport>& rows) {
    auto out = open_out(path);
    out << csv_line(bound_fields()) << '\n';
    for (const auto& r : rows) out << csv_line(bound_cells(r)) << '\n';
}

void write_columns(const std::filesystem::path& path, const ColumnTable& table) {
    auto out = open_out(path);
    out << csv_line(table.names) << '\n';
    for (const auto& row : table.rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) cells.push_back(format_number(v));
        out << csv_line(cells) << '\n';
    }
}

void write_key_values(const std::filesystem::path& path, const KeyValues& entries) {
    auto out = open_out(path);
    for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
}

} // namespace lpres
