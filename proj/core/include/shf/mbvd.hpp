#pragma once

#include <string>
#include <string_view>

#include "shf/mat2.hpp"

namespace shf {

/// One-port Modified Butterworth-Van Dyke resonator.
///
/// Topology: motional branch (rm + j w lm + 1/(j w cm)) in parallel with the
/// static branch (r0 + 1/(j w c0)), the pair in series with rs. cm == 0 (and
/// lm == 0) means there is no motional branch.
struct MbvdParams {
    double c0 = 0.0;  ///< static capacitance, F
    double cm = 0.0;  ///< motional capacitance, F
    double lm = 0.0;  ///< motional inductance, H
    double rm = 0.0;  ///< motional resistance, ohm
    double rs = 0.0;  ///< series routing resistance, ohm
    double r0 = 0.0;  ///< dielectric-loss resistance, ohm

    bool has_motional_branch() const { return cm > 0.0; }
    bool lossless() const { return rm == 0.0 && rs == 0.0 && r0 == 0.0; }

    /// Throws DomainError naming the first offending field.
    void validate() const;
};

/// Formula used to map (fs, fp) to an electromechanical coupling value.
enum class Kt2Definition {
    /// (pi^2 / 8) (1 - fs^2 / fp^2); the toolkit default.
    pi2_over_8,
    /// (fp^2 - fs^2) / fp^2
    ratio,
    /// (pi/2)(fs/fp) / tan((pi/2)(fs/fp))
    tangent,
};

inline constexpr Kt2Definition kDefaultKt2Definition = Kt2Definition::pi2_over_8;

std::string_view to_string(Kt2Definition def);
/// Accepts the to_string() spellings; throws DomainError otherwise.
Kt2Definition parse_kt2_definition(std::string_view name);
/// Supremum of the coupling reachable under `def` (fs/fp -> 0).
double kt2_upper_bound(Kt2Definition def);

cplx synth_admittance(const MbvdParams& p, double freq_hz);

struct ResonanceFreqs {
    double fs = 0.0;
    double fp_lossless = 0.0;
    double fp_min = 0.0;  ///< |Y| minimum in [fs, 1.5 fp_lossless]
};

ResonanceFreqs resonance_freqs(const MbvdParams& p);

double kt2_from_freqs(double fs, double fp, Kt2Definition def = kDefaultKt2Definition);

/// Inverse of kt2_from_freqs: the fs/fp ratio that yields `kt2`.
double freq_ratio_from_kt2(double kt2, Kt2Definition def = kDefaultKt2Definition);

struct ResonatorTargets {
    double fres = 0.0;
    double kt2 = 0.0;
    double qm = 0.0;
    double c0 = 0.0;
    double rs = 0.0;
    double r0 = 0.0;
};

/// Element values that place fs at `fres` with lossless coupling `kt2` and
/// mechanical quality factor `qm`. rs and r0 are passed through.
MbvdParams from_targets(const ResonatorTargets& t, Kt2Definition def = kDefaultKt2Definition);

struct ResonatorMetrics {
    double fs = 0.0;
    double fp = 0.0;           ///< |Y|-minimum anti-resonance
    double fp_lossless = 0.0;
    double kt2 = 0.0;          ///< from (fs, fp)
    double qm = 0.0;
    double fom_m = 0.0;        ///< kt2 * qm
    double fom = 0.0;          ///< 2 pi fp c0 / |Y(fp)|
    bool fom_infinite = false; ///< no dissipative element; fom holds +inf
    Kt2Definition definition = kDefaultKt2Definition;
};

ResonatorMetrics metrics(const MbvdParams& p, Kt2Definition def = kDefaultKt2Definition);

std::string describe(const ResonatorMetrics& m);

}  // namespace shf
