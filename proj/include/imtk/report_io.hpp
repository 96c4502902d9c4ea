#ifndef IMTK_REPORT_IO_HPP
#define IMTK_REPORT_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "imtk/spaces.hpp"

namespace imtk {

/// FNV-1a of arbitrary bytes, hex-encoded; used for config hashes and cache
/// keys.
std::string fnv1a_hex(std::string_view bytes);

/// Doubles are written with %.17g so equal values round-trip byte-identically.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

/// Signal export: columns t, mode_1, ..., mode_M.
void write_signal_csv(const std::string& path, const WeightedSignal& signal);

}  // namespace imtk

#endif
