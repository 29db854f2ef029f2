#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lpres/resonance.hpp"

namespace lpres {

/// 17 significant digits, round-trip exact.
std::string format_number(double v);

/// Plot-ready numeric columns.
struct ColumnTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Header naming every BoundReport field; rhs_terms is serialized as key=value pairs joined by ';'.
std::vector<std::string> bound_fields();
std::vector<std::string> bound_cells(const BoundReport& r);

std::string csv_line(const std::vector<std::string>& cells);

void write_bound_csv(const std::filesystem::path& path, const std::vector<BoundReport>& rows);
void write_columns(const std::filesystem::path& path, const ColumnTable& table);

/// "key = value" lines in the given order.
void write_key_values(const std::filesystem::path& path, const KeyValues& entries);

} // namespace lpres
