#include "shf/acoustic1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shf/errors.hpp"

namespace shf::acoustic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kJ{0.0, 1.0};

// Guard on the |tr/2| > 1 test so rounding in products of matched sections
// does not open zero-width gaps.
constexpr double kBandGuard = 1e-12;

template <class F>
double bisect_sign(F&& g, double a, double b) {
    double ga = g(a);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b || (b - a) <= 1e-14 * std::abs(b)) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (ga > 0.0)) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

void require_positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(what + " must be > 0");
}

double half_trace_margin(const Cell& cell, double f) {
    return std::abs(cell_matrix(cell, f).m.trace().real() / 2.0) - 1.0 - kBandGuard;
}

}  // namespace

void Layer::validate() const {
    const std::string who = "Layer" + (material.empty() ? std::string() : " '" + material + "'");
    require_positive(thickness, who + " thickness");
    require_positive(density, who + " density");
    require_positive(velocity, who + " velocity");
}

void UnitCellGeometry::validate() const {
    require_positive(w_r, "UnitCellGeometry.w_r");
    require_positive(w_u, "UnitCellGeometry.w_u");
    if (w_r >= w_u) throw DomainError("UnitCellGeometry: w_r must be < w_u");
    require_positive(t1, "UnitCellGeometry.t1");
    if (!(t2 >= 0.0)) throw DomainError("UnitCellGeometry.t2 must be >= 0");
    if (rod_stack.empty()) throw DomainError("UnitCellGeometry.rod_stack is empty");
    if (trench_stack.empty()) throw DomainError("UnitCellGeometry.trench_stack is empty");
    for (const auto& l : rod_stack) l.validate();
    for (const auto& l : trench_stack) l.validate();
}

void Segment::validate() const {
    if (!(length >= 0.0)) throw DomainError("Segment.length must be >= 0");
    require_positive(velocity, "Segment.velocity");
    require_positive(impedance, "Segment.impedance");
}

double StopBand::center() const { return std::sqrt(f_lo * f_hi); }

Mat2 segment_matrix(double length, double velocity, double impedance, double freq_hz,
                    std::optional<AcousticLoss> loss) {
    cplx v = velocity;
    cplx z = impedance;
    if (loss) {
        require_positive(loss->q, "AcousticLoss.q");
        const cplx factor{1.0, 1.0 / (2.0 * loss->q)};
        v *= factor;
        z *= factor;
    }
    const cplx kl = 2.0 * kPi * freq_hz * length / v;
    const cplx c = std::cos(kl);
    const cplx s = std::sin(kl);
    return {c, kJ * s / z, kJ * z * s, c};
}

Mat2 stack_matrix(const Stack& stack, double freq_hz) {
    Mat2 m;
    for (const auto& l : stack) m *= segment_matrix(l.thickness, l.velocity, l.density * l.velocity, freq_hz);
    return m;
}

double te_resonance(const Stack& stack, std::optional<Bracket> bracket, int scan_points) {
    if (stack.empty()) throw DomainError("te_resonance: empty stack");
    for (const auto& l : stack) l.validate();
    if (scan_points < 2) throw DomainError("te_resonance: scan_points must be >= 2");

    if (!bracket) {
        const auto thickest = std::max_element(
            stack.begin(), stack.end(),
            [](const Layer& a, const Layer& b) { return a.thickness < b.thickness; });
        const double est = thickest->velocity / (2.0 * thickest->thickness);
        bracket = Bracket{0.1 * est, 3.0 * est};
    }
    require_positive(bracket->f_min, "te_resonance bracket f_min");
    if (!(bracket->f_max > bracket->f_min)) throw DomainError("te_resonance: bracket f_max must exceed f_min");

    auto m21 = [&stack](double f) { return stack_matrix(stack, f)(1, 0).imag(); };
    const double step = (bracket->f_max - bracket->f_min) / scan_points;
    double f_prev = bracket->f_min;
    double g_prev = m21(f_prev);
    if (g_prev == 0.0) return f_prev;
    for (int i = 1; i <= scan_points; ++i) {
        const double f = i == scan_points ? bracket->f_max : bracket->f_min + i * step;
        const double g = m21(f);
        if (g == 0.0) return f;
        if ((g > 0.0) != (g_prev > 0.0)) return bisect_sign(m21, f_prev, f);
        f_prev = f;
        g_prev = g;
    }
    throw NumericalError("te_resonance: no TE resonance in range [" + std::to_string(bracket->f_min) +
                         ", " + std::to_string(bracket->f_max) + "] Hz");
}

CellMatrix cell_matrix(const Cell& cell, double freq_hz, std::optional<AcousticLoss> loss) {
    require_positive(freq_hz, "cell_matrix frequency");
    CellMatrix out;
    out.empty_cell = cell.empty();
    for (const auto& s : cell) {
        s.validate();
        out.m *= segment_matrix(s.length, s.velocity, s.impedance, freq_hz, loss);
    }
    return out;
}

BlochResult bloch(const Cell& cell, double freq_hz) {
    const Mat2 m = cell_matrix(cell, freq_hz).m;
    if (std::abs(m.det() - 1.0) > 1e-6)
        throw NumericalError("bloch: |det(M) - 1| = " + std::to_string(std::abs(m.det() - 1.0)) +
                             " exceeds 1e-6 (internal consistency)");
    // Lossless sections keep tr(M) real; lambda^2 - tr(M) lambda + 1 = 0.
    const double h = m.trace().real() / 2.0;

    BlochResult r;
    r.half_trace = h;
    r.in_stop_band = std::abs(h) > 1.0 + kBandGuard;
    if (r.in_stop_band) {
        const double disc = std::sqrt(h * h - 1.0);
        const double decaying = h > 0.0 ? h - disc : h + disc;
        r.bloch_factor = decaying;
        r.attenuation_per_cell = -std::log(std::abs(decaying));
    } else {
        const double c = std::clamp(h, -1.0, 1.0);
        r.bloch_factor = {c, std::sqrt(1.0 - c * c)};
    }
    return r;
}

double transmission(const Cell& cell, int n_cells, double freq_hz, double z_src, double z_load,
                    std::optional<AcousticLoss> loss) {
    if (n_cells < 1) throw DomainError("transmission: n_cells must be >= 1");
    require_positive(z_src, "transmission z_src");
    require_positive(z_load, "transmission z_load");
    const Mat2 unit = cell_matrix(cell, freq_hz, loss).m;
    Mat2 m;
    for (int i = 0; i < n_cells; ++i) m *= unit;
    // (v, F) -> two-port with F as the across variable: A = M22, B = M21, C = M12, D = M11.
    const cplx a = m(1, 1), b = m(1, 0), c = m(0, 1), d = m(0, 0);
    const cplx s21 = 2.0 * std::sqrt(z_src * z_load) / (a * z_load + b + c * z_src * z_load + d * z_src);
    return std::norm(s21);
}

std::vector<StopBand> find_stop_bands(const Cell& cell, double f_lo, double f_hi, int n_grid) {
    require_positive(f_lo, "find_stop_bands f_lo");
    if (!(f_hi > f_lo)) throw DomainError("find_stop_bands: f_lo must be < f_hi");
    if (n_grid < 100) throw DomainError("find_stop_bands: n_grid must be >= 100");

    auto margin = [&cell](double f) { return half_trace_margin(cell, f); };
    std::vector<StopBand> bands;
    const double step = (f_hi - f_lo) / (n_grid - 1);
    auto grid = [&](int i) { return i == n_grid - 1 ? f_hi : f_lo + i * step; };

    bool inside = false;
    double start = 0.0;
    double f_prev = f_lo;
    for (int i = 0; i < n_grid; ++i) {
        const double f = grid(i);
        const bool flagged = margin(f) > 0.0;
        if (flagged && !inside) {
            start = i == 0 ? f_lo : bisect_sign(margin, f_prev, f);
            inside = true;
        } else if (!flagged && inside) {
            bands.push_back({start, bisect_sign(margin, f_prev, f)});
            inside = false;
        }
        f_prev = f;
    }
    if (inside) bands.push_back({start, f_hi});
    return bands;
}

Segment effective_segment(const Stack& stack, double length) {
    if (stack.empty()) throw DomainError("effective_segment: empty stack");
    double mass = 0.0, stiffness = 0.0;
    for (const auto& l : stack) {
        l.validate();
        mass += l.density * l.thickness;
        stiffness += l.density * l.velocity * l.velocity * l.thickness;
    }
    const double v = std::sqrt(stiffness / mass);
    return {length, v, mass * v};
}

Cell geometry_to_segments(const UnitCellGeometry& g) {
    g.validate();
    const double trench = 0.5 * (g.w_u - g.w_r);
    const Segment t = effective_segment(g.trench_stack, trench);
    const Segment r = effective_segment(g.rod_stack, g.w_r);
    return {t, r, t};
}

Cell scale_lengths(const Cell& cell, double s) {
    require_positive(s, "scale_lengths factor");
    Cell out = cell;
    for (auto& seg : out) seg.length *= s;
    return out;
}

Calibration calibrate_to_stop_band(const Cell& cell, double f_target, double max_rel_shift,
                                   int n_grid) {
    require_positive(f_target, "calibrate_to_stop_band f_target");
    require_positive(max_rel_shift, "calibrate_to_stop_band max_rel_shift");
    const double span = 2.0 * max_rel_shift;
    const auto bands = find_stop_bands(cell, f_target * (1.0 - span), f_target * (1.0 + span), n_grid);

    const StopBand* best = nullptr;
    double best_width = 0.0;
    for (const auto& b : bands) {
        if (std::abs(b.center() / f_target - 1.0) > max_rel_shift) continue;
        const double width = (b.f_hi - b.f_lo) / b.center();
        if (width > best_width) {
            best = &b;
            best_width = width;
        }
    }
    if (!best)
        throw NumericalError("calibrate_to_stop_band: no stop-band centred within " +
                             std::to_string(100.0 * max_rel_shift) + "% of the target");

    Calibration c;
    c.length_scale = best->center() / f_target;
    c.cell = scale_lengths(cell, c.length_scale);
    c.band = {best->f_lo / c.length_scale, best->f_hi / c.length_scale};
    return c;
}

}  // namespace shf::acoustic
