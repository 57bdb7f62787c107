#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chrate/skeleton.hpp"

namespace chrate {

inline constexpr const char* kVersion = "0.1.0";

// Full-precision (%.17g) formatting used for every numeric cell, so repeat
// runs produce byte-identical files.
std::string format_g17(double v);

// "# chrate <version> config=<16-hex-digit hash>"
std::string provenance_line(std::uint64_t config_hash);

struct CsvCell {
  std::string text;
  CsvCell(double v) : text(format_g17(v)) {}
  CsvCell(int v) : text(std::to_string(v)) {}
  CsvCell(long long v) : text(std::to_string(v)) {}
  CsvCell(const std::string& s) : text(s) {}
  CsvCell(const char* s) : text(s) {}
};

// Provenance comment, header row, then data rows.
void write_csv(const std::string& path, std::uint64_t config_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows);

// (t, node index, value) long format.
void write_path_csv(const std::string& path, std::uint64_t config_hash,
                    const SpaceTimePath& p);
// (t, cell index, value) long format.
void write_control_csv(const std::string& path, std::uint64_t config_hash,
                       const Control& c);

// Compact binary container: magic, kind, {n, m, T} header, row-major doubles.
void write_path_binary(const std::string& path, const SpaceTimePath& p);
SpaceTimePath read_path_binary(const std::string& path);
void write_control_binary(const std::string& path, const Control& c);
Control read_control_binary(const std::string& path);

// Default output directory: $CHRATE_OUT when set, else ".".
std::string default_output_dir();

}  // namespace chrate
