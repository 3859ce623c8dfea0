#include "gridstress/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "gridstress/errors.hpp"
#include "json.hpp"

namespace gridstress {

std::string format_sig6(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << csv_escape(table.columns[c]);
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ',';
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>) out << format_sig6(v);
                        else if constexpr (std::is_same_v<T, long long>) out << v;
                        else if constexpr (std::is_same_v<T, std::string>) out << csv_escape(v);
                    },
                    row[c]);
            }
            out << '\n';
        }
        return;
    }

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) obj[table.columns[c]] = nullptr;
                    else if constexpr (std::is_same_v<T, double>)
                        obj[table.columns[c]] = std::strtod(format_sig6(v).c_str(), nullptr);
                    else obj[table.columns[c]] = v;
                },
                row[c]);
        }
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
}

std::filesystem::path write_table_file(const std::filesystem::path& dir, const Table& table,
                                       OutputFormat format) {
    std::filesystem::create_directories(dir);
    auto path = dir / (table.name + (format == OutputFormat::Csv ? ".csv" : ".json"));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
    write_table(out, table, format);
    return path;
}

}  // namespace gridstress
