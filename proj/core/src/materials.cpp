#include "shf/materials.hpp"

#include "shf/errors.hpp"

namespace shf::acoustic {

const MaterialTable& default_materials() {
    static const MaterialTable table{
        {"Ti", {4506.0, 6070.0, "handbook bulk values (polycrystalline Ti)"}},
        {"Pt", {21450.0, 3960.0, "handbook bulk values (polycrystalline Pt)"}},
        {"Al", {2700.0, 6420.0, "handbook bulk values (polycrystalline Al)"}},
        {"AlN", {3260.0, 11350.0, "c-axis AlN, c33 ~ 395 GPa"}},
        {"AlScN",
         {3500.0, 8800.0,
          "Al0.76Sc0.24N estimate: Vegard-law density between AlN and ScN, "
          "c33 ~ 270 GPa from published softening trends near 24% Sc"}},
    };
    return table;
}

Layer make_layer(const MaterialTable& table, const std::string& name, double thickness) {
    const auto it = table.find(name);
    if (it == table.end()) throw DomainError("unknown material '" + name + "'");
    Layer l{thickness, it->second.density, it->second.velocity, name};
    l.validate();
    return l;
}

namespace {
constexpr double kNm = 1e-9;
constexpr double kUm = 1e-6;
constexpr double kT1 = 150 * kNm;
constexpr double kT2 = 350 * kNm;
}  // namespace

Stack reference_rod_stack(const MaterialTable& table) {
    return {make_layer(table, "Ti", 20 * kNm), make_layer(table, "Pt", 50 * kNm),
            make_layer(table, "AlScN", kT1 + kT2), make_layer(table, "Al", 110 * kNm)};
}

UnitCellGeometry reference_2drr_geometry(const MaterialTable& table) {
    UnitCellGeometry g;
    g.w_r = 9 * kUm;
    g.w_u = 24 * kUm;
    g.t1 = kT1;
    g.t2 = kT2;
    g.rod_stack = reference_rod_stack(table);
    g.trench_stack = {make_layer(table, "Ti", 20 * kNm), make_layer(table, "Pt", 50 * kNm),
                      make_layer(table, "AlScN", kT1)};
    return g;
}

}  // namespace shf::acoustic
