#include "shf/mbvd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "shf/errors.hpp"

namespace shf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kJ{0.0, 1.0};

void require_finite_nonneg(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
        throw DomainError(std::string("MbvdParams.") + name + " must be finite and >= 0");
}

// Tangent-form coupling as a function of x = fs/fp; decreasing on (0, 1].
double tangent_kt2(double x) {
    if (x >= 1.0) return 0.0;
    const double a = 0.5 * kPi * x;
    return a / std::tan(a);
}

}  // namespace

void MbvdParams::validate() const {
    if (!std::isfinite(c0) || c0 <= 0.0) throw DomainError("MbvdParams.c0 must be > 0");
    require_finite_nonneg(cm, "cm");
    require_finite_nonneg(lm, "lm");
    require_finite_nonneg(rm, "rm");
    require_finite_nonneg(rs, "rs");
    require_finite_nonneg(r0, "r0");
    if ((cm > 0.0) != (lm > 0.0))
        throw DomainError("MbvdParams: cm and lm must both be > 0 or both be 0");
}

std::string_view to_string(Kt2Definition def) {
    switch (def) {
        case Kt2Definition::pi2_over_8: return "pi2_over_8";
        case Kt2Definition::ratio: return "ratio";
        case Kt2Definition::tangent: return "tangent";
    }
    return "unknown";
}

Kt2Definition parse_kt2_definition(std::string_view name) {
    for (auto d : {Kt2Definition::pi2_over_8, Kt2Definition::ratio, Kt2Definition::tangent})
        if (name == to_string(d)) return d;
    throw DomainError("unknown kt2 definition '" + std::string(name) +
                      "' (expected pi2_over_8, ratio or tangent)");
}

double kt2_upper_bound(Kt2Definition def) {
    return def == Kt2Definition::pi2_over_8 ? kPi * kPi / 8.0 : 1.0;
}

cplx synth_admittance(const MbvdParams& p, double freq_hz) {
    if (!(freq_hz > 0.0) || !std::isfinite(freq_hz))
        throw DomainError("synth_admittance: frequency must be > 0");
    const double w = 2.0 * kPi * freq_hz;
    const cplx y_static = 1.0 / (p.r0 + 1.0 / (kJ * w * p.c0));
    cplx y_par = y_static;
    if (p.cm > 0.0) y_par += 1.0 / (p.rm + kJ * (w * p.lm - 1.0 / (w * p.cm)));
    return 1.0 / (p.rs + 1.0 / y_par);
}

ResonanceFreqs resonance_freqs(const MbvdParams& p) {
    p.validate();
    if (!p.has_motional_branch())
        throw DomainError("resonance_freqs: no motional branch (cm = 0)");

    ResonanceFreqs r;
    r.fs = 1.0 / (2.0 * kPi * std::sqrt(p.lm * p.cm));
    r.fp_lossless = r.fs * std::sqrt(1.0 + p.cm / p.c0);

    // Coarse scan for the basin, then Brent inside the neighbouring cells.
    // The scan starts just above fs where a lossless |Y| has its pole.
    const double lo = r.fs * (1.0 + 1e-9);
    const double hi = 1.5 * r.fp_lossless;
    constexpr int kScan = 4000;
    const double step = (hi - lo) / kScan;
    int best = 0;
    double best_mag = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScan; ++i) {
        const double mag = std::abs(synth_admittance(p, lo + i * step));
        if (mag < best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    const double a = lo + std::max(best - 1, 0) * step;
    const double b = lo + std::min(best + 1, kScan) * step;
    auto mag = [&p](double f) { return std::abs(synth_admittance(p, f)); };
    const auto [f_min, _] = boost::math::tools::brent_find_minima(
        mag, a, b, std::numeric_limits<double>::digits / 2 + 4);
    r.fp_min = f_min;
    return r;
}

double kt2_from_freqs(double fs, double fp, Kt2Definition def) {
    if (!(fs > 0.0) || !std::isfinite(fs) || !std::isfinite(fp))
        throw DomainError("kt2_from_freqs: fs must be > 0");
    if (fp < fs) throw DomainError("kt2_from_freqs: fp must be >= fs");
    const double x = fs / fp;
    switch (def) {
        case Kt2Definition::pi2_over_8: return kPi * kPi / 8.0 * (1.0 - x * x);
        case Kt2Definition::ratio: return 1.0 - x * x;
        case Kt2Definition::tangent: return tangent_kt2(x);
    }
    return 0.0;
}

double freq_ratio_from_kt2(double kt2, Kt2Definition def) {
    if (!(kt2 > 0.0) || !(kt2 < kt2_upper_bound(def)))
        throw DomainError("kt2 must lie in (0, " + std::to_string(kt2_upper_bound(def)) + ")");
    switch (def) {
        case Kt2Definition::pi2_over_8: return std::sqrt(1.0 - 8.0 * kt2 / (kPi * kPi));
        case Kt2Definition::ratio: return std::sqrt(1.0 - kt2);
        case Kt2Definition::tangent: {
            double lo = 0.0, hi = 1.0;  // tangent_kt2 decreasing: 1 at 0, 0 at 1
            for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
                const double mid = 0.5 * (lo + hi);
                (tangent_kt2(mid) > kt2 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return 1.0;
}

MbvdParams from_targets(const ResonatorTargets& t, Kt2Definition def) {
    if (!(t.fres > 0.0) || !std::isfinite(t.fres)) throw DomainError("from_targets: fres must be > 0");
    if (!(t.qm > 0.0)) throw DomainError("from_targets: qm must be > 0");
    if (!(t.c0 > 0.0)) throw DomainError("from_targets: c0 must be > 0");
    const double x = freq_ratio_from_kt2(t.kt2, def);

    MbvdParams p;
    p.c0 = t.c0;
    p.cm = t.c0 * (1.0 / (x * x) - 1.0);
    const double w = 2.0 * kPi * t.fres;
    p.lm = 1.0 / (w * w * p.cm);
    p.rm = std::isinf(t.qm) ? 0.0 : w * p.lm / t.qm;
    p.rs = t.rs;
    p.r0 = t.r0;
    p.validate();
    return p;
}

ResonatorMetrics metrics(const MbvdParams& p, Kt2Definition def) {
    const ResonanceFreqs rf = resonance_freqs(p);
    ResonatorMetrics m;
    m.definition = def;
    m.fs = rf.fs;
    m.fp = rf.fp_min;
    m.fp_lossless = rf.fp_lossless;
    m.kt2 = kt2_from_freqs(rf.fs, rf.fp_min, def);
    m.qm = p.rm > 0.0 ? 2.0 * kPi * rf.fs * p.lm / p.rm : std::numeric_limits<double>::infinity();
    m.fom_m = m.kt2 * m.qm;
    if (p.lossless()) {
        m.fom = std::numeric_limits<double>::infinity();
        m.fom_infinite = true;
    } else {
        m.fom = 2.0 * kPi * rf.fp_min * p.c0 / std::abs(synth_admittance(p, rf.fp_min));
    }
    return m;
}

std::string describe(const ResonatorMetrics& m) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "fs = %.6f GHz, fp = %.6f GHz (lossless %.6f GHz)\n"
                  "kt2 = %.3f %% [%s], Qm = %.2f, FoM(m) = %.3f, FoM = %s",
                  m.fs * 1e-9, m.fp * 1e-9, m.fp_lossless * 1e-9, 100.0 * m.kt2,
                  std::string(to_string(m.definition)).c_str(), m.qm, m.fom_m,
                  m.fom_infinite ? "inf (lossless)" : std::to_string(m.fom).c_str());
    return buf;
}

}  // namespace shf
