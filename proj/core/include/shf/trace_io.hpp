#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "shf/extraction.hpp"
#include "shf/touchstone.hpp"

namespace shf::io {

/// %.17g: shortest-safe text for a bit-exact reparse.
std::string format_number(double v);

/// Comma-separated table with a header row. Cells are written with format_number.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Header `frequency_hz,re,im`.
void write_admittance_csv(std::ostream& os, const AdmittanceTrace& trace);
AdmittanceTrace parse_admittance_csv(std::string_view text);

/// One-port record to admittance via Y = (1 - S11) / (z_ref (1 + S11)).
AdmittanceTrace touchstone_to_admittance(const TouchstoneRecord& rec);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Dispatches on extension: .s1p (Touchstone) or .csv.
AdmittanceTrace load_admittance(const std::filesystem::path& path);

}  // namespace shf::io
