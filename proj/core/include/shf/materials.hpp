#pragma once

#include <map>
#include <string>

#include "shf/acoustic1d.hpp"

namespace shf::acoustic {

struct Material {
    double density = 0.0;   ///< kg/m^3
    double velocity = 0.0;  ///< longitudinal, m/s
    std::string source;     ///< where the numbers come from
};

using MaterialTable = std::map<std::string, Material>;

/// Shipped defaults for Ti, Pt, Al, AlN and Al0.76Sc0.24N (key "AlScN").
const MaterialTable& default_materials();

/// Throws DomainError if `name` is not in `table`.
Layer make_layer(const MaterialTable& table, const std::string& name, double thickness);

/// Rod-trench cell with the reference device dimensions: W_r = 9 um,
/// W_u = 24 um, T_1 = 150 nm, T_2 = 350 nm, Ti/Pt 20/50 nm bottom plate and
/// 110 nm Al strips on the rods.
UnitCellGeometry reference_2drr_geometry(const MaterialTable& table = default_materials());

/// Ti / Pt / AlScN (t1 + t2) / Al stack under the strips of the reference cell.
Stack reference_rod_stack(const MaterialTable& table = default_materials());

}  // namespace shf::acoustic
