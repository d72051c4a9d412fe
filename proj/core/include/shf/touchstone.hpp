#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shf/mat2.hpp"

namespace shf::io {

enum class FreqUnit { hz, khz, mhz, ghz };
enum class DataFormat { ri, ma, db };

double unit_scale(FreqUnit u);
std::string_view to_string(FreqUnit u);
std::string_view to_string(DataFormat f);

/// Touchstone v1 S-parameter file, 1 or 2 ports.
///
/// Numbers are kept exactly as written (frequency in `unit`, pairs in
/// `format`) so that a write/parse cycle is lossless; the accessors convert
/// to Hz and complex linear values.
struct TouchstoneRecord {
    FreqUnit unit = FreqUnit::ghz;
    DataFormat format = DataFormat::ma;
    double z_ref = 50.0;
    int ports = 1;

    struct Row {
        double freq = 0.0;                            ///< in `unit`
        std::vector<std::pair<double, double>> pairs; ///< ports^2 pairs, v1 order (11, 21, 12, 22)
    };
    std::vector<Row> rows;

    double frequency_hz(std::size_t row) const;
    cplx value(std::size_t row, std::size_t k) const;
    /// Convenience for n-port index (i, j), 0-based.
    cplx s(std::size_t row, int i, int j) const;
};

/// `ports` = 0 infers the port count from the first data row.
TouchstoneRecord parse_touchstone(std::string_view text, int ports = 0);
std::string write_touchstone(const TouchstoneRecord& rec);

/// Builds a record from linear complex data; `values[row]` holds ports^2 entries
/// in v1 order.
TouchstoneRecord make_touchstone(const std::vector<double>& freqs_hz,
                                 const std::vector<std::vector<cplx>>& values, int ports,
                                 DataFormat format = DataFormat::ri, FreqUnit unit = FreqUnit::hz,
                                 double z_ref = 50.0);

std::pair<double, double> encode(cplx v, DataFormat f);
cplx decode(std::pair<double, double> p, DataFormat f);

}  // namespace shf::io
