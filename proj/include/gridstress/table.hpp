#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace gridstress {

/// Empty (MISSING), real, integer or text.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

enum class OutputFormat { Csv, Json };

/// Six significant digits, never "-0".
std::string format_sig6(double value);

/// CSV: header row, then rows with reals at 6 significant digits and empty
/// cells for MISSING. JSON: array of objects keyed by column, null for
/// MISSING, reals rounded the same way.
void write_table(std::ostream& out, const Table& table, OutputFormat format);

/// Writes `<dir>/<name>.csv|.json`, creating `dir`; returns the path.
std::filesystem::path write_table_file(const std::filesystem::path& dir, const Table& table,
                                       OutputFormat format);

}  // namespace gridstress
