#include "shf/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "shf/errors.hpp"

namespace shf::io {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

void write_admittance_csv(std::ostream& os, const AdmittanceTrace& trace) {
    std::vector<std::vector<double>> rows;
    rows.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i)
        rows.push_back({trace.freqs[i], trace.values[i].real(), trace.values[i].imag()});
    write_csv(os, {"frequency_hz", "re", "im"}, rows);
}

AdmittanceTrace parse_admittance_csv(std::string_view text) {
    AdmittanceTrace t;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "frequency_hz,re,im")
                throw ParseError(line_no, "expected header 'frequency_hz,re,im'");
            header_seen = true;
            continue;
        }
        double vals[3];
        std::size_t start = 0;
        for (int k = 0; k < 3; ++k) {
            const std::size_t comma = k < 2 ? line.find(',', start) : line.size();
            if (comma == std::string_view::npos) throw ParseError(line_no, "expected 3 columns");
            const std::string_view cell = line.substr(start, comma - start);
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), vals[k]);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw ParseError(line_no, "invalid number '" + std::string(cell) + "'");
            start = comma + 1;
        }
        if (!t.freqs.empty() && !(vals[0] > t.freqs.back()))
            throw ParseError(line_no, "frequency_hz must be strictly increasing");
        t.freqs.push_back(vals[0]);
        t.values.emplace_back(vals[1], vals[2]);
    }
    if (!header_seen) throw ParseError(0, "empty admittance CSV");
    return t;
}

AdmittanceTrace touchstone_to_admittance(const TouchstoneRecord& rec) {
    if (rec.ports != 1) throw DomainError("touchstone_to_admittance: need a 1-port record");
    AdmittanceTrace t;
    t.ref_impedance = rec.z_ref;
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        t.freqs.push_back(rec.frequency_hz(i));
        t.values.push_back(s11_to_admittance(rec.value(i, 0), rec.z_ref));
    }
    return t;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path.string() + "'");
    out << content;
}

AdmittanceTrace load_admittance(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    const std::string text = read_file(path);
    if (ext == ".s1p" || ext == ".S1P") return touchstone_to_admittance(parse_touchstone(text, 1));
    if (ext == ".csv") return parse_admittance_csv(text);
    throw DomainError("unsupported input '" + path.string() + "' (expected .s1p or .csv)");
}

}  // namespace shf::io
