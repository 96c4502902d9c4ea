#include "imtk/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "imtk/errors.hpp"

namespace imtk {

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);  // LF endings on every platform
    if (!out) throw ValidationError("cannot open for writing: " + path);
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_signal_csv(const std::string& path, const WeightedSignal& signal) {
    CsvTable table;
    table.header.push_back("t");
    for (std::size_t n = 0; n < signal.mode_count(); ++n)
        table.header.push_back("mode_" + std::to_string(n + 1));
    for (std::size_t k = 0; k < signal.grid().nodes(); ++k) {
        std::vector<double> row;
        row.reserve(signal.mode_count() + 1);
        row.push_back(signal.grid().node(k));
        for (std::size_t n = 0; n < signal.mode_count(); ++n) row.push_back(signal.at(n, k));
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

}  // namespace imtk
