#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "shf/acoustic1d.hpp"
#include "shf/ladder.hpp"
#include "shf/materials.hpp"
#include "shf/mbvd.hpp"

namespace shf::io {

/// Parsed design configuration. See docs/config_format.md for the grammar.
struct DesignConfig {
    acoustic::MaterialTable materials = acoustic::default_materials();
    std::map<std::string, acoustic::Stack> stacks;
    std::optional<acoustic::UnitCellGeometry> geometry;
    std::optional<acoustic::Cell> segments;  ///< explicit cell, overrides geometry
    std::optional<ResonatorTargets> resonator;
    std::optional<LadderDesign> ladder;
    Kt2Definition definition = kDefaultKt2Definition;

    /// The unit cell: explicit segments if given, else the reduced geometry.
    acoustic::Cell cell() const;
    bool has_cell() const { return segments.has_value() || geometry.has_value(); }
    const acoustic::Stack& stack(const std::string& name) const;
};

/// Throws ParseError (with line number) for syntax problems and DomainError
/// naming the field for values that violate downstream invariants.
DesignConfig parse_config(std::string_view text);

}  // namespace shf::io
