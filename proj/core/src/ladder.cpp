#include "shf/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shf/errors.hpp"

namespace shf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

std::size_t LadderSpec::count(Position p) const {
    return static_cast<std::size_t>(std::count_if(
        elements.begin(), elements.end(), [p](const LadderElement& e) { return e.position == p; }));
}

void LadderSpec::validate(bool filtering) const {
    if (!(z0 > 0.0)) throw DomainError("LadderSpec.z0 must be > 0");
    for (std::size_t i = 0; i < elements.size(); ++i) {
        try {
            elements[i].resonator.validate();
        } catch (const DomainError& e) {
            throw DomainError("LadderSpec element #" + std::to_string(i) + ": " + e.what());
        }
    }
    if (filtering && (count(Position::series) == 0 || count(Position::shunt) == 0))
        throw DomainError("LadderSpec: a filter needs at least one series and one shunt element");
}

LadderSpec design_ladder(const LadderDesign& d) {
    if (d.order < 2) throw DomainError("design_ladder: order must be >= 2");
    if (!(d.r > 0.0)) throw DomainError("design_ladder: r must be > 0");
    if (!(d.z0 > 0.0)) throw DomainError("design_ladder: z0 must be > 0");
    if (!(d.f_series > 0.0)) throw DomainError("design_ladder: f_series must be > 0");
    if (!(d.losses.rs >= 0.0) || !(d.losses.r0_c0 >= 0.0))
        throw DomainError("design_ladder: losses must be >= 0");

    const double x = freq_ratio_from_kt2(d.kt2, d.definition);  // fs / fp
    const double fp_series = d.f_series / x;
    const double f_center = std::sqrt(d.f_series * fp_series);
    const double c0_series = 1.0 / (2.0 * kPi * f_center * d.z0 * std::sqrt(d.r));
    const double c0_shunt = d.r * c0_series;
    const double f_shunt = d.f_series * x;

    LadderSpec spec;
    spec.z0 = d.z0;
    spec.f_center = f_center;
    for (int i = 0; i < d.order; ++i) {
        const bool series = i % 2 == 0;
        const double c0 = series ? c0_series : c0_shunt;
        const ResonatorTargets t{series ? d.f_series : f_shunt, d.kt2, d.qm, c0, d.losses.rs,
                                 d.losses.r0_c0 / c0};
        spec.elements.push_back({series ? Position::series : Position::shunt, from_targets(t, d.definition)});
    }
    return spec;
}

Mat2 ladder_abcd(const LadderSpec& spec, double freq_hz) {
    Mat2 m;
    for (const auto& e : spec.elements) {
        const cplx y = synth_admittance(e.resonator, freq_hz);
        if (e.position == Position::series)
            m *= Mat2{1.0, 1.0 / y, 0.0, 1.0};
        else
            m *= Mat2{1.0, 0.0, y, 1.0};
    }
    return m;
}

TwoPortResponse ladder_response(const LadderSpec& spec, const std::vector<double>& freqs) {
    spec.validate();
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!(freqs[i] > 0.0)) throw DomainError("ladder_response: frequencies must be > 0");
        if (i && !(freqs[i] > freqs[i - 1]))
            throw DomainError("ladder_response: frequencies must be strictly increasing");
    }

    TwoPortResponse out;
    out.freqs = freqs;
    const std::size_t n = freqs.size();
    out.s11.resize(n);
    out.s21.resize(n);
    out.s12.resize(n);
    out.s22.resize(n);
    const double z0 = spec.z0;
    for (std::size_t i = 0; i < n; ++i) {
        const Mat2 m = ladder_abcd(spec, freqs[i]);
        const cplx a = m.a(), b = m.b(), c = m.c(), d = m.d();
        const cplx den = a + b / z0 + c * z0 + d;
        if (!finite(a) || !finite(b) || !finite(c) || !finite(d) || den == cplx{0.0}) {
            out.s11[i] = out.s21[i] = out.s12[i] = out.s22[i] = {kNaN, kNaN};
            out.singular.push_back(i);
            continue;
        }
        out.s11[i] = (a + b / z0 - c * z0 - d) / den;
        out.s21[i] = 2.0 / den;
        out.s12[i] = 2.0 * m.det() / den;
        out.s22[i] = (-a + b / z0 - c * z0 + d) / den;
    }
    return out;
}

std::vector<double> filter_grid(double f_center_estimate, std::size_t points, double lo_factor,
                                double hi_factor) {
    if (!(f_center_estimate > 0.0)) throw DomainError("filter_grid: centre must be > 0");
    if (points < 2 || !(hi_factor > lo_factor) || !(lo_factor > 0.0))
        throw DomainError("filter_grid: need points >= 2 and 0 < lo_factor < hi_factor");
    std::vector<double> g(points);
    const double lo = lo_factor * f_center_estimate;
    const double hi = hi_factor * f_center_estimate;
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

FilterMetrics filter_metrics(const std::vector<double>& freqs, const std::vector<cplx>& s21,
                             double guard) {
    if (freqs.size() != s21.size()) throw DomainError("filter_metrics: length mismatch");
    if (!(guard > 0.0 && guard < 1.0)) throw DomainError("filter_metrics: guard must lie in (0, 1)");

    std::vector<double> f, db;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!finite(s21[i])) continue;
        f.push_back(freqs[i]);
        db.push_back(20.0 * std::log10(std::abs(s21[i])));
    }
    if (f.size() < 3) throw NumericalError("filter_metrics: passband unresolved (too few samples)");

    const auto peak = static_cast<std::size_t>(std::distance(db.begin(), std::max_element(db.begin(), db.end())));
    const double threshold = db[peak] - 3.0;
    std::size_t lo = db.size(), hi = 0;
    for (std::size_t i = 0; i < db.size(); ++i) {
        if (db[i] >= threshold) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (lo == 0 || hi + 1 >= db.size())
        throw NumericalError("filter_metrics: passband unresolved (no 3-dB crossing inside the grid)");

    auto cross = [&](std::size_t a, std::size_t b) {
        return f[a] + (threshold - db[a]) * (f[b] - f[a]) / (db[b] - db[a]);
    };
    FilterMetrics m;
    m.il_db = -db[peak];
    m.f_peak = f[peak];
    m.f_lo = cross(lo - 1, lo);
    m.f_hi = cross(hi, hi + 1);
    const double fc = std::sqrt(m.f_lo * m.f_hi);
    m.bw_frac = (m.f_hi - m.f_lo) / fc;

    double worst = -std::numeric_limits<double>::infinity();
    bool below = false, above = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const bool out_lo = f[i] < (1.0 - guard) * fc;
        const bool out_hi = f[i] > (1.0 + guard) * fc;
        below |= out_lo;
        above |= out_hi;
        if (out_lo || out_hi) worst = std::max(worst, db[i]);
    }
    if (!below || !above)
        throw DomainError("filter_metrics: grid does not reach the out-of-band region on both sides");
    m.rejection_db = -worst;
    return m;
}

std::vector<SweepRow> kt2_sweep(const SweepSettings& s) {
    if (s.n_steps < 2) throw DomainError("kt2_sweep: n_steps must be >= 2");
    if (!(s.kt2_lo >= 0.0) || !(s.kt2_hi > s.kt2_lo) ||
        !(s.kt2_hi < kt2_upper_bound(s.base.definition)))
        throw DomainError("kt2_sweep: need 0 <= kt2_lo < kt2_hi < kt2 upper bound");

    const auto grid = filter_grid(s.base.f_series, s.grid_points);
    std::vector<SweepRow> rows;
    for (int i = 0; i < s.n_steps; ++i) {
        SweepRow row;
        row.kt2 = i == s.n_steps - 1
                      ? s.kt2_hi
                      : s.kt2_lo + (s.kt2_hi - s.kt2_lo) * i / static_cast<double>(s.n_steps - 1);
        try {
            LadderDesign d = s.base;
            d.kt2 = row.kt2;
            const auto resp = ladder_response(design_ladder(d), grid);
            row.metrics = filter_metrics(resp.freqs, resp.s21, s.guard);
            row.resolved = true;
        } catch (const std::exception& e) {
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace shf
