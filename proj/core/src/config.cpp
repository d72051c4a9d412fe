#include "shf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <vector>

#include "shf/errors.hpp"

namespace shf::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

double number(std::string_view tok, std::size_t line, std::string_view field) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line, "field '" + std::string(field) + "': invalid number '" + std::string(tok) + "'");
    return v;
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string kind;
    std::string name;
    std::size_t line = 0;
    std::map<std::string, Entry> entries;

    std::string label() const { return name.empty() ? "[" + kind + "]" : "[" + kind + " " + name + "]"; }

    const Entry* find(const std::string& key) const {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
    double get(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) throw ParseError(line, label() + ": missing field '" + key + "'");
        return number(e->value, e->line, label() + "." + key);
    }
    double get_or(const std::string& key, double fallback) const {
        return find(key) ? get(key) : fallback;
    }
};

// Wraps invariant failures so the message names the config field.
template <class F>
void checked(const Section& s, F&& f) {
    try {
        f();
    } catch (const DomainError& e) {
        throw DomainError(s.label() + " (line " + std::to_string(s.line) + "): " + e.what());
    }
}

}  // namespace

acoustic::Cell DesignConfig::cell() const {
    if (segments) return *segments;
    if (geometry) return acoustic::geometry_to_segments(*geometry);
    throw DomainError("config defines neither [cell] geometry nor segments");
}

const acoustic::Stack& DesignConfig::stack(const std::string& name) const {
    const auto it = stacks.find(name);
    if (it == stacks.end()) throw DomainError("config has no [stack " + name + "]");
    return it->second;
}

DesignConfig parse_config(std::string_view text) {
    static const std::map<std::string, std::vector<std::string>> kKeys{
        {"material", {"density", "velocity", "source"}},
        {"stack", {"layers"}},
        {"cell", {"w_r", "w_u", "t1", "t2", "rod_stack", "trench_stack", "segments"}},
        {"resonator", {"fres", "kt2", "qm", "c0", "rs", "r0"}},
        {"ladder", {"order", "r", "z0", "f_series", "kt2", "qm", "rs", "r0_c0"}},
        {"options", {"kt2_definition"}},
    };

    std::vector<Section> sections;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            const auto words = split(trim(line.substr(1, line.size() - 2)), ' ');
            Section s;
            s.kind = std::string(words.at(0));
            s.line = line_no;
            if (!kKeys.count(s.kind)) throw ParseError(line_no, "unknown section [" + s.kind + "]");
            if (words.size() > 2) throw ParseError(line_no, "section header takes at most one name");
            if (words.size() == 2) s.name = std::string(words[1]);
            if ((s.kind == "material" || s.kind == "stack") && s.name.empty())
                throw ParseError(line_no, "[" + s.kind + "] needs a name, e.g. [" + s.kind + " rod]");
            sections.push_back(std::move(s));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        if (sections.empty()) throw ParseError(line_no, "key outside of any section");
        Section& s = sections.back();
        const std::string key(trim(line.substr(0, eq)));
        const auto& allowed = kKeys.at(s.kind);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError(line_no, s.label() + ": unknown field '" + key + "'");
        if (s.entries.count(key)) throw ParseError(line_no, s.label() + ": duplicate field '" + key + "'");
        s.entries[key] = {std::string(trim(line.substr(eq + 1))), line_no};
    }

    DesignConfig cfg;
    for (const auto& s : sections) {
        if (s.kind == "options") {
            if (const Entry* e = s.find("kt2_definition")) checked(s, [&] { cfg.definition = parse_kt2_definition(e->value); });
        } else if (s.kind == "material") {
            acoustic::Material m{s.get("density"), s.get("velocity"),
                                 s.find("source") ? s.find("source")->value : "config"};
            if (!(m.density > 0.0) || !(m.velocity > 0.0))
                throw DomainError(s.label() + ": density and velocity must be > 0");
            cfg.materials[s.name] = m;
        }
    }
    for (const auto& s : sections) {
        if (s.kind != "stack") continue;
        const Entry* e = s.find("layers");
        if (!e) throw ParseError(s.line, s.label() + ": missing field 'layers'");
        acoustic::Stack st;
        for (auto item : split(e->value, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) throw ParseError(e->line, s.label() + ".layers: expected 'material:thickness'");
            const double t = number(parts[1], e->line, s.label() + ".layers");
            checked(s, [&] { st.push_back(acoustic::make_layer(cfg.materials, std::string(parts[0]), t)); });
        }
        if (st.empty()) throw DomainError(s.label() + ": empty stack");
        cfg.stacks[s.name] = std::move(st);
    }
    for (const auto& s : sections) {
        if (s.kind == "cell") {
            if (const Entry* e = s.find("segments")) {
                acoustic::Cell cell;
                for (auto item : split(e->value, ',')) {
                    const auto parts = split(item, ':');
                    if (parts.size() != 3)
                        throw ParseError(e->line, s.label() + ".segments: expected 'length:velocity:impedance'");
                    acoustic::Segment seg{number(parts[0], e->line, "segments"), number(parts[1], e->line, "segments"),
                                          number(parts[2], e->line, "segments")};
                    checked(s, [&] { seg.validate(); });
                    cell.push_back(seg);
                }
                cfg.segments = std::move(cell);
            }
            if (s.find("w_r") || s.find("w_u")) {
                acoustic::UnitCellGeometry g;
                g.w_r = s.get("w_r");
                g.w_u = s.get("w_u");
                g.t1 = s.get("t1");
                g.t2 = s.get_or("t2", 0.0);
                const auto stack_name = [&](const char* key) {
                    const Entry* e = s.find(key);
                    if (!e) throw ParseError(s.line, s.label() + ": missing field '" + key + "'");
                    if (!cfg.stacks.count(e->value))
                        throw DomainError(s.label() + "." + key + ": unknown stack '" + e->value + "'");
                    return e->value;
                };
                g.rod_stack = cfg.stacks.at(stack_name("rod_stack"));
                g.trench_stack = cfg.stacks.at(stack_name("trench_stack"));
                checked(s, [&] { g.validate(); });
                cfg.geometry = std::move(g);
            }
        } else if (s.kind == "resonator") {
            ResonatorTargets t{s.get("fres"), s.get("kt2"), s.get("qm"), s.get("c0"), s.get_or("rs", 0.0),
                               s.get_or("r0", 0.0)};
            checked(s, [&] { (void)from_targets(t, cfg.definition); });
            cfg.resonator = t;
        }
    }
    for (const auto& s : sections) {
        if (s.kind != "ladder") continue;
        LadderDesign d;
        d.definition = cfg.definition;
        if (cfg.resonator) {
            d.f_series = cfg.resonator->fres;
            d.kt2 = cfg.resonator->kt2;
            d.qm = cfg.resonator->qm;
        }
        const double order = s.get_or("order", d.order);
        if (order != static_cast<int>(order)) throw DomainError(s.label() + ".order must be an integer");
        d.order = static_cast<int>(order);
        d.r = s.get_or("r", d.r);
        d.z0 = s.get_or("z0", d.z0);
        d.f_series = s.get_or("f_series", d.f_series);
        d.kt2 = s.get_or("kt2", d.kt2);
        d.qm = s.get_or("qm", d.qm);
        d.losses.rs = s.get_or("rs", d.losses.rs);
        d.losses.r0_c0 = s.get_or("r0_c0", d.losses.r0_c0);
        checked(s, [&] { (void)design_ladder(d); });
        cfg.ladder = d;
    }
    return cfg;
}

}  // namespace shf::io
