#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shf/mat2.hpp"

namespace shf::acoustic {

/// One film of a layered stack, probed in thickness extension.
struct Layer {
    double thickness = 0.0;  ///< m
    double density = 0.0;    ///< kg/m^3
    double velocity = 0.0;   ///< longitudinal sound speed, m/s
    std::string material;    ///< label only

    void validate() const;
};

using Stack = std::vector<Layer>;

/// Cross-section of one rod-trench unit cell (rod centred between two
/// identical trenches).
struct UnitCellGeometry {
    double w_r = 0.0;  ///< rod width, m
    double w_u = 0.0;  ///< unit-cell width, m
    double t1 = 0.0;   ///< trench piezo film thickness, m
    double t2 = 0.0;   ///< rod step height above the trench film, m
    Stack rod_stack;
    Stack trench_stack;

    void validate() const;
};

/// Laterally propagating 1-D section.
struct Segment {
    double length = 0.0;     ///< m
    double velocity = 0.0;   ///< effective phase velocity, m/s
    double impedance = 0.0;  ///< effective impedance per unit depth

    void validate() const;
};

using Cell = std::vector<Segment>;

struct StopBand {
    double f_lo = 0.0;
    double f_hi = 0.0;

    double center() const;  ///< geometric mean of the edges
    bool contains(double f) const { return f > f_lo && f < f_hi; }
};

/// Uniform mechanical quality factor, applied as v (1 + j / (2Q)).
struct AcousticLoss {
    double q = 0.0;
};

/// Transfer matrix of one uniform section on the (particle velocity, force)
/// state, mapping the right-end state to the left-end state:
/// [[cos kL, j sin kL / z], [j z sin kL, cos kL]], k = 2 pi f / v.
Mat2 segment_matrix(double length, double velocity, double impedance, double freq_hz,
                    std::optional<AcousticLoss> loss = std::nullopt);

Mat2 stack_matrix(const Stack& stack, double freq_hz);

struct Bracket {
    double f_min = 0.0;
    double f_max = 0.0;
};

/// Lowest stress-free/stress-free resonance (M21 = 0) of the stack. Without
/// an explicit bracket, searches (0.1, 3) x v / (2 t) of the thickest layer.
/// `scan_points` sets the sign-change scan before bisection.
double te_resonance(const Stack& stack, std::optional<Bracket> bracket = std::nullopt,
                    int scan_points = 4096);

struct CellMatrix {
    Mat2 m;
    bool empty_cell = false;  ///< set when the cell had no segments
};

CellMatrix cell_matrix(const Cell& cell, double freq_hz,
                       std::optional<AcousticLoss> loss = std::nullopt);

struct BlochResult {
    cplx bloch_factor;          ///< eigenvalue with |lambda| <= 1
    bool in_stop_band = false;  ///< |tr(M) / 2| > 1
    double attenuation_per_cell = 0.0;
    double half_trace = 0.0;    ///< Re(tr(M)) / 2
};

/// Lossless cells only.
BlochResult bloch(const Cell& cell, double freq_hz);

/// Power transmission |P_out / P_in| through n_cells copies of `cell`
/// between a source of impedance z_src and a load z_load.
double transmission(const Cell& cell, int n_cells, double freq_hz, double z_src, double z_load,
                    std::optional<AcousticLoss> loss = std::nullopt);

std::vector<StopBand> find_stop_bands(const Cell& cell, double f_lo, double f_hi, int n_grid);

/// Effective lateral section for one region of the cross-section:
/// v = sqrt(sum(rho v^2 t) / sum(rho t)), z = sum(rho t) * v.
Segment effective_segment(const Stack& stack, double length);

/// trench (w_u - w_r)/2, rod w_r, trench (w_u - w_r)/2.
Cell geometry_to_segments(const UnitCellGeometry& g);

Cell scale_lengths(const Cell& cell, double s);

struct Calibration {
    double length_scale = 1.0;  ///< lengths multiplied by this
    StopBand band;              ///< band of the calibrated cell holding the target
    Cell cell;                  ///< calibrated cell
};

/// Finds the widest stop-band whose centre lies within `max_rel_shift` of
/// f_target and rescales the cell lengths to centre it on f_target. Throws
/// NumericalError when no band is close enough.
Calibration calibrate_to_stop_band(const Cell& cell, double f_target, double max_rel_shift = 0.05,
                                   int n_grid = 20000);

}  // namespace shf::acoustic
