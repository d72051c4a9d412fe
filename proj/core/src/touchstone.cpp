#include "shf/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "shf/errors.hpp"

namespace shf::io {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_number(std::string_view tok, std::size_t line) {
    double v = 0.0;
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line, "invalid number '" + std::string(tok) + "'");
    return v;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double unit_scale(FreqUnit u) {
    switch (u) {
        case FreqUnit::hz: return 1.0;
        case FreqUnit::khz: return 1e3;
        case FreqUnit::mhz: return 1e6;
        case FreqUnit::ghz: return 1e9;
    }
    return 1.0;
}

std::string_view to_string(FreqUnit u) {
    switch (u) {
        case FreqUnit::hz: return "Hz";
        case FreqUnit::khz: return "kHz";
        case FreqUnit::mhz: return "MHz";
        case FreqUnit::ghz: return "GHz";
    }
    return "?";
}

std::string_view to_string(DataFormat f) {
    switch (f) {
        case DataFormat::ri: return "RI";
        case DataFormat::ma: return "MA";
        case DataFormat::db: return "DB";
    }
    return "?";
}

std::pair<double, double> encode(cplx v, DataFormat f) {
    switch (f) {
        case DataFormat::ri: return {v.real(), v.imag()};
        case DataFormat::ma: return {std::abs(v), std::arg(v) / kDeg};
        case DataFormat::db: return {20.0 * std::log10(std::abs(v)), std::arg(v) / kDeg};
    }
    return {};
}

cplx decode(std::pair<double, double> p, DataFormat f) {
    switch (f) {
        case DataFormat::ri: return {p.first, p.second};
        case DataFormat::ma: return std::polar(p.first, p.second * kDeg);
        case DataFormat::db: return std::polar(std::pow(10.0, p.first / 20.0), p.second * kDeg);
    }
    return {};
}

double TouchstoneRecord::frequency_hz(std::size_t row) const {
    return rows.at(row).freq * unit_scale(unit);
}

cplx TouchstoneRecord::value(std::size_t row, std::size_t k) const {
    return decode(rows.at(row).pairs.at(k), format);
}

cplx TouchstoneRecord::s(std::size_t row, int i, int j) const {
    // v1 two-port order is 11, 21, 12, 22: column-major.
    return value(row, static_cast<std::size_t>(j * ports + i));
}

TouchstoneRecord parse_touchstone(std::string_view text, int ports) {
    if (text.empty()) throw ParseError(0, "empty Touchstone text");
    if (ports < 0 || ports > 2) throw ParseError(0, "only 1- and 2-port Touchstone files are supported");

    TouchstoneRecord rec;
    bool have_options = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto bang = line.find('!'); bang != std::string_view::npos) line = line.substr(0, bang);
        const auto toks = split_ws(line);
        if (toks.empty()) continue;

        if (toks.front().front() == '[')
            throw ParseError(line_no, "Touchstone v2 keyword '" + std::string(toks.front()) +
                                          "' found; only Touchstone v1 is supported");

        if (toks.front().front() == '#') {
            if (have_options) throw ParseError(line_no, "duplicate option line");
            have_options = true;
            std::vector<std::string_view> opts(toks.begin(), toks.end());
            if (opts.front().size() > 1) opts.front().remove_prefix(1); else opts.erase(opts.begin());
            for (std::size_t i = 0; i < opts.size(); ++i) {
                const std::string t = lower(opts[i]);
                if (t == "hz") rec.unit = FreqUnit::hz;
                else if (t == "khz") rec.unit = FreqUnit::khz;
                else if (t == "mhz") rec.unit = FreqUnit::mhz;
                else if (t == "ghz") rec.unit = FreqUnit::ghz;
                else if (t == "ri") rec.format = DataFormat::ri;
                else if (t == "ma") rec.format = DataFormat::ma;
                else if (t == "db") rec.format = DataFormat::db;
                else if (t == "s") {}
                else if (t == "y" || t == "z" || t == "h" || t == "g")
                    throw ParseError(line_no, "parameter type '" + std::string(opts[i]) +
                                                  "' not supported (only S)");
                else if (t == "r") {
                    if (i + 1 >= opts.size()) throw ParseError(line_no, "option 'R' needs a value");
                    rec.z_ref = parse_number(opts[++i], line_no);
                    if (!(rec.z_ref > 0.0)) throw ParseError(line_no, "reference impedance must be > 0");
                } else {
                    throw ParseError(line_no, "unknown option token '" + std::string(opts[i]) + "'");
                }
            }
            continue;
        }

        if (ports == 0) {
            if (toks.size() == 3) ports = 1;
            else if (toks.size() == 9) ports = 2;
            else throw ParseError(line_no, "cannot infer port count from " + std::to_string(toks.size()) +
                                               " values (expected 3 or 9)");
        }
        const std::size_t expect = 1 + 2 * static_cast<std::size_t>(ports * ports);
        if (toks.size() != expect)
            throw ParseError(line_no, "expected " + std::to_string(expect) + " values, got " +
                                          std::to_string(toks.size()));
        TouchstoneRecord::Row row;
        row.freq = parse_number(toks[0], line_no);
        if (!(row.freq >= 0.0)) throw ParseError(line_no, "negative frequency");
        if (!rec.rows.empty() && !(row.freq > rec.rows.back().freq))
            throw ParseError(line_no, "frequencies must be strictly increasing");
        for (std::size_t k = 1; k < toks.size(); k += 2)
            row.pairs.emplace_back(parse_number(toks[k], line_no), parse_number(toks[k + 1], line_no));
        rec.rows.push_back(std::move(row));
    }
    if (rec.rows.empty()) throw ParseError(line_no, "no data rows");
    rec.ports = ports;
    return rec;
}

std::string write_touchstone(const TouchstoneRecord& rec) {
    std::string out = "! written by shfkit\n# " + std::string(to_string(rec.unit)) + " S " +
                      std::string(to_string(rec.format)) + " R " + fmt(rec.z_ref) + "\n";
    for (const auto& row : rec.rows) {
        out += fmt(row.freq);
        for (const auto& [a, b] : row.pairs) {
            out += ' ';
            out += fmt(a);
            out += ' ';
            out += fmt(b);
        }
        out += '\n';
    }
    return out;
}

TouchstoneRecord make_touchstone(const std::vector<double>& freqs_hz,
                                 const std::vector<std::vector<cplx>>& values, int ports,
                                 DataFormat format, FreqUnit unit, double z_ref) {
    if (ports != 1 && ports != 2) throw DomainError("make_touchstone: ports must be 1 or 2");
    if (freqs_hz.size() != values.size()) throw DomainError("make_touchstone: length mismatch");
    TouchstoneRecord rec;
    rec.unit = unit;
    rec.format = format;
    rec.z_ref = z_ref;
    rec.ports = ports;
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
        if (values[i].size() != static_cast<std::size_t>(ports * ports))
            throw DomainError("make_touchstone: row " + std::to_string(i) + " has wrong value count");
        TouchstoneRecord::Row row;
        row.freq = freqs_hz[i] / unit_scale(unit);
        for (const cplx& v : values[i]) row.pairs.push_back(encode(v, format));
        rec.rows.push_back(std::move(row));
    }
    return rec;
}

}  // namespace shf::io
