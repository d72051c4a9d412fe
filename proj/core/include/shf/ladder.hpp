#pragma once

#include <string>
#include <vector>

#include "shf/mat2.hpp"
#include "shf/mbvd.hpp"

namespace shf {

enum class Position { series, shunt };

struct LadderElement {
    Position position = Position::series;
    MbvdParams resonator;
};

struct LadderSpec {
    std::vector<LadderElement> elements;
    double z0 = 50.0;        ///< termination, ohm
    double f_center = 0.0;   ///< design centre used for C0 sizing, Hz

    std::size_t count(Position p) const;
    /// `filtering` additionally requires at least one series and one shunt element.
    void validate(bool filtering = false) const;
};

/// Resistive parasitics given to every designed resonator.
struct LadderLosses {
    double rs = 0.0;      ///< ohm, series routing resistance
    double r0_c0 = 0.0;   ///< s, dielectric-loss time constant; r0 = r0_c0 / C0

    static LadderLosses none() { return {}; }
    /// The measured device's R0 * C0 = 1.5 ohm * 1250 fF; no routing resistance.
    static LadderLosses reference_device() { return {0.0, 1.5 * 1250e-15}; }
};

struct LadderDesign {
    int order = 5;
    double f_series = 5.31e9;
    double kt2 = 0.239;
    double qm = 101.0;
    double r = 3.0;  ///< C0 shunt / C0 series
    double z0 = 50.0;
    LadderLosses losses = LadderLosses::reference_device();
    Kt2Definition definition = kDefaultKt2Definition;
};

/// Alternating series/shunt chain starting with a series element. Shunt
/// resonators are detuned so their lossless anti-resonance equals the series
/// resonance; C0_series = 1 / (2 pi f_c z0 sqrt(r)) with f_c the geometric
/// mean of the series fs and lossless fp, and C0_shunt = r C0_series.
LadderSpec design_ladder(const LadderDesign& d);

/// ABCD product of the chain at one frequency.
Mat2 ladder_abcd(const LadderSpec& spec, double freq_hz);

struct TwoPortResponse {
    std::vector<double> freqs;
    std::vector<cplx> s11, s21, s12, s22;
    std::vector<std::size_t> singular;  ///< indices recorded as NaN
};

TwoPortResponse ladder_response(const LadderSpec& spec, const std::vector<double>& freqs);

/// Default analysis window: [0.8, 1.2] x the passband centre estimate.
std::vector<double> filter_grid(double f_center_estimate, std::size_t points = 4001,
                                double lo_factor = 0.8, double hi_factor = 1.2);

struct FilterMetrics {
    double il_db = 0.0;
    double bw_frac = 0.0;
    double rejection_db = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
    double f_peak = 0.0;
};

/// 3-dB band from the outermost crossings of (peak - 3 dB), linearly
/// interpolated in dB; rejection is the worst out-of-band level beyond
/// (1 +- guard) f_c, f_c = sqrt(f_lo f_hi). NaN samples are skipped.
FilterMetrics filter_metrics(const std::vector<double>& freqs, const std::vector<cplx>& s21,
                             double guard = 0.15);

struct SweepRow {
    double kt2 = 0.0;
    bool resolved = false;
    FilterMetrics metrics;
    std::string note;  ///< reason when unresolved
};

struct SweepSettings {
    double kt2_lo = 0.01;
    double kt2_hi = 0.35;
    int n_steps = 35;
    LadderDesign base;        ///< kt2 overwritten per row
    std::size_t grid_points = 4001;
    double guard = 0.15;
};

std::vector<SweepRow> kt2_sweep(const SweepSettings& s);

}  // namespace shf
