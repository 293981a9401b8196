#pragma once

// Deterministic table output. Every value is printed with 17 significant
// digits (round-trip exact for IEEE doubles), so identical runs produce
// byte-identical files and downstream tools can reparse without loss.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace fiberforce {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Column-major-agnostic numeric table with '#'-prefixed metadata lines.
struct Table {
    std::vector<std::string> meta;     // written as "# <line>"
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row) { rows.push_back(std::move(row)); }
};

inline void write_csv(std::ostream& os, const Table& table) {
    for (const auto& line : table.meta) os << "# " << line << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ',';
        os << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
}

}  // namespace fiberforce
