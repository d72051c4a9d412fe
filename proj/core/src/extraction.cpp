#include "shf/extraction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "shf/errors.hpp"

namespace shf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kJ{0.0, 1.0};
constexpr int kN = detail::kNumFitParams;

using Vec6 = Eigen::Matrix<double, kN, 1>;
using Mat6 = Eigen::Matrix<double, kN, kN>;

Vec6 to_log(const MbvdParams& p, double floor) {
    Vec6 v;
    v << std::log(p.c0), std::log(p.cm), std::log(p.lm), std::log(std::max(p.rm, floor)),
        std::log(std::max(p.rs, floor)), std::log(std::max(p.r0, floor));
    return v;
}

MbvdParams from_log(const Vec6& v) {
    return {std::exp(v[0]), std::exp(v[1]), std::exp(v[2]),
            std::exp(v[3]), std::exp(v[4]), std::exp(v[5])};
}

struct Problem {
    const AdmittanceTrace& trace;
    std::vector<double> inv_mag;  // 1 / |Y_i|

    explicit Problem(const AdmittanceTrace& t) : trace(t) {
        inv_mag.reserve(t.size());
        for (const cplx& y : t.values) {
            const double m = std::abs(y);
            if (!(m > 0.0)) throw DomainError("fit_mbvd: trace contains a zero admittance sample");
            inv_mag.push_back(1.0 / m);
        }
    }

    // Fixed-order summation keeps the cost bit-reproducible.
    double cost(const MbvdParams& p) const {
        double c = 0.0;
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const cplx r = (synth_admittance(p, trace.freqs[i]) - trace.values[i]) * inv_mag[i];
            c += std::norm(r);
        }
        return c;
    }

    // Normal equations J^T J and J^T r of the stacked (re, im) residual.
    void normal_equations(const MbvdParams& p, const FitOptions& opts, Mat6& jtj,
                          Vec6& jtr) const {
        jtj.setZero();
        jtr.setZero();
        const Vec6 theta = to_log(p, 0.0);
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const double f = trace.freqs[i];
            const cplx r = (synth_admittance(p, f) - trace.values[i]) * inv_mag[i];
            std::array<cplx, kN> g;
            if (opts.analytic_jacobian) {
                g = detail::admittance_log_gradient(p, f);
            } else {
                for (int k = 0; k < kN; ++k) {
                    Vec6 up = theta, dn = theta;
                    up[k] += opts.fd_rel_step;
                    dn[k] -= opts.fd_rel_step;
                    g[static_cast<std::size_t>(k)] =
                        (synth_admittance(from_log(up), f) - synth_admittance(from_log(dn), f)) /
                        (2.0 * opts.fd_rel_step);
                }
            }
            Vec6 jr, ji;
            for (int k = 0; k < kN; ++k) {
                const cplx gk = g[static_cast<std::size_t>(k)] * inv_mag[i];
                jr[k] = gk.real();
                ji[k] = gk.imag();
            }
            jtj.noalias() += jr * jr.transpose() + ji * ji.transpose();
            jtr.noalias() += jr * r.real() + ji * r.imag();
        }
    }
};

// Samples in the lowest (or highest) decile of a grid of n points.
std::size_t decile_end(std::size_t n) { return std::max<std::size_t>(1, n / 10); }

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2) return *mid;
    const double upper = *mid;
    return 0.5 * (upper + *std::max_element(v.begin(), mid));
}

}  // namespace

void AdmittanceTrace::validate() const {
    if (freqs.size() != values.size())
        throw DomainError("AdmittanceTrace: freqs and values lengths differ");
    if (freqs.size() < kMinPoints)
        throw DomainError("AdmittanceTrace: need at least " + std::to_string(kMinPoints) +
                          " points, got " + std::to_string(freqs.size()));
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!(freqs[i] > 0.0) || !std::isfinite(freqs[i]))
            throw DomainError("AdmittanceTrace: frequency #" + std::to_string(i) + " not > 0");
        if (i && !(freqs[i] > freqs[i - 1]))
            throw DomainError("AdmittanceTrace: frequencies not strictly increasing at #" +
                              std::to_string(i));
        if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
            throw DomainError("AdmittanceTrace: non-finite sample #" + std::to_string(i));
    }
    if (!(ref_impedance > 0.0)) throw DomainError("AdmittanceTrace: ref_impedance must be > 0");
}

std::vector<double> linear_grid(double f_lo, double f_hi, std::size_t n) {
    if (n < 2 || !(f_hi > f_lo)) throw DomainError("linear_grid: need n >= 2 and f_hi > f_lo");
    std::vector<double> g(n);
    const double step = (f_hi - f_lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = f_lo + step * static_cast<double>(i);
    g.back() = f_hi;
    return g;
}

AdmittanceTrace synthesize_trace(const MbvdParams& p, std::vector<double> freqs) {
    p.validate();
    AdmittanceTrace t;
    t.values.reserve(freqs.size());
    for (double f : freqs) t.values.push_back(synth_admittance(p, f));
    t.freqs = std::move(freqs);
    return t;
}

cplx s11_to_admittance(cplx s11, double z_ref) {
    if (!(z_ref > 0.0)) throw DomainError("s11_to_admittance: z_ref must be > 0");
    const cplx den = 1.0 + s11;
    if (den == cplx{0.0}) throw DomainError("s11_to_admittance: s11 = -1 is a short (singular)");
    return (1.0 - s11) / (den * z_ref);
}

cplx admittance_to_s11(cplx y, double z_ref) {
    if (!(z_ref > 0.0)) throw DomainError("admittance_to_s11: z_ref must be > 0");
    const cplx yn = y * z_ref;
    return (1.0 - yn) / (1.0 + yn);
}

MbvdParams initial_guess(const AdmittanceTrace& trace) {
    trace.validate();
    const std::size_t n = trace.size();
    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(trace.values[i]);

    const auto i_max = static_cast<std::size_t>(
        std::distance(mag.begin(), std::max_element(mag.begin(), mag.end())));
    if (i_max == 0 || i_max + 1 >= n)
        throw NumericalError("initial_guess: no resonance found (no interior |Y| maximum)");
    const auto i_min = static_cast<std::size_t>(std::distance(
        mag.begin(), std::min_element(mag.begin() + static_cast<std::ptrdiff_t>(i_max) + 1,
                                      mag.end())));
    if (i_min + 1 >= n)
        throw NumericalError("initial_guess: no resonance found (anti-resonance outside grid)");

    const double fs = trace.freqs[i_max];
    const double fp = trace.freqs[i_min];
    if (!(fp > fs)) throw NumericalError("initial_guess: no resonance found (fp <= fs)");
    const double ratio = fp * fp / (fs * fs) - 1.0;  // cm / c0

    // Below fs the motional branch still adds cm / (1 - (f/fs)^2) to the
    // apparent capacitance; divide it out so the median estimates c0 alone.
    std::vector<double> caps;
    for (std::size_t i = 0; i < decile_end(n); ++i) {
        const double f = trace.freqs[i];
        const double x = f / fs;
        const double apparent = trace.values[i].imag() / (2.0 * kPi * f);
        caps.push_back(x < 1.0 ? apparent / (1.0 + ratio / (1.0 - x * x)) : apparent);
    }
    MbvdParams p;
    p.c0 = median(caps);
    if (!(p.c0 > 0.0)) throw NumericalError("initial_guess: non-capacitive low-frequency response");
    p.cm = ratio * p.c0;
    const double ws = 2.0 * kPi * fs;
    p.lm = 1.0 / (ws * ws * p.cm);

    double tail_r = std::numeric_limits<double>::infinity();
    for (std::size_t i = n - decile_end(n); i < n; ++i)
        tail_r = std::min(tail_r, (1.0 / trace.values[i]).real());
    p.rs = std::max(tail_r, 0.0);

    // Loaded Q from the half-power width of the |Y| peak.
    const double half = mag[i_max] / std::numbers::sqrt2;
    std::size_t left = i_max, right = i_max;
    while (left > 0 && mag[left] > half) --left;
    while (right + 1 < n && mag[right] > half) ++right;
    const double width = trace.freqs[right] - trace.freqs[left];
    const double q_loaded = width > 0.0 ? fs / width : 1e3;

    const double x_m = ws * p.lm;  // motional reactance scale
    const double rm_direct = 1.0 / mag[i_max] - p.rs;
    p.rm = rm_direct > 0.0 ? rm_direct : std::max(x_m / q_loaded - p.rs, 0.1 * x_m / q_loaded);
    p.r0 = 0.0;
    return p;
}

namespace detail {

std::array<cplx, kNumFitParams> admittance_log_gradient(const MbvdParams& p, double freq_hz) {
    const double w = 2.0 * kPi * freq_hz;
    const cplx zs = p.r0 + 1.0 / (kJ * w * p.c0);
    const cplx zm = p.rm + kJ * (w * p.lm - 1.0 / (w * p.cm));
    const cplx ys = 1.0 / zs;
    const cplx ym = 1.0 / zm;
    const cplx zp = 1.0 / (ys + ym);
    const cplx y = 1.0 / (p.rs + zp);
    const cplx y2zp2 = y * y * zp * zp;
    const cplx d_zs = -y2zp2 * ys * ys;  // dY / dZs
    const cplx d_zm = -y2zp2 * ym * ym;  // dY / dZm
    return {
        d_zs * (-1.0 / (kJ * w * p.c0)),
        d_zm * (-1.0 / (kJ * w * p.cm)),
        d_zm * (kJ * w * p.lm),
        d_zm * p.rm,
        -y * y * p.rs,
        d_zs * p.r0,
    };
}

}  // namespace detail

FitResult fit_mbvd(const AdmittanceTrace& trace, const MbvdParams& init, const FitOptions& opts) {
    trace.validate();
    init.validate();
    if (!init.has_motional_branch()) throw DomainError("fit_mbvd: init has no motional branch (cm = 0)");

    const Problem prob(trace);
    Vec6 theta = to_log(init, opts.resistance_floor);
    MbvdParams cur = from_log(theta);
    double cost = prob.cost(cur);
    if (!std::isfinite(cost)) throw NumericalError("fit_mbvd: non-finite cost at the initial point");

    FitResult res;
    res.accepted_costs.push_back(cost);
    // Per-point relative mismatch at the rounding level of the log-parameter
    // round trip, amplified near resonance by roughly Qm.
    const double eps_floor = 1e-13;
    const double exact_cost = static_cast<double>(trace.size()) * eps_floor * eps_floor;
    double lambda = opts.lambda0;
    bool need_jacobian = true;
    Mat6 jtj;
    Vec6 jtr;

    while (true) {
        if (cost <= exact_cost) {
            res.converged = true;
            res.stop_reason = "exact fit";
            break;
        }
        if (res.iterations >= opts.max_iterations) {
            res.stop_reason = "iteration limit";
            break;
        }
        if (need_jacobian) {
            prob.normal_equations(cur, opts, jtj, jtr);
            if (!jtj.allFinite() || !jtr.allFinite())
                throw NumericalError("fit_mbvd: non-finite Jacobian at iteration " +
                                     std::to_string(res.iterations));
            need_jacobian = false;
        }
        ++res.iterations;

        Mat6 a = jtj;
        for (int k = 0; k < kN; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-30);
        const Vec6 step = a.ldlt().solve(-jtr);
        const Vec6 trial_theta = theta + step;
        const MbvdParams trial = from_log(trial_theta);
        double trial_cost = step.allFinite() ? prob.cost(trial) : std::numeric_limits<double>::quiet_NaN();
        if (std::isnan(trial_cost) && step.allFinite())
            throw NumericalError("fit_mbvd: model evaluation returned NaN at iteration " +
                                 std::to_string(res.iterations));

        if (trial_cost < cost) {
            const double rel = (cost - trial_cost) / cost;
            theta = trial_theta;
            cur = trial;
            cost = trial_cost;
            res.accepted_costs.push_back(cost);
            lambda = std::max(lambda / 10.0, 1e-15);
            need_jacobian = true;
            if (rel < opts.rel_cost_tol) {
                res.converged = true;
                res.stop_reason = "relative cost decrease below tolerance";
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e16) {
                res.converged = true;
                res.stop_reason = "no descent at maximum damping";
                break;
            }
        }
    }

    for (double* r : {&cur.rm, &cur.rs, &cur.r0})
        if (*r < opts.snap_to_zero) *r = 0.0;
    res.params = cur;
    res.residual = std::sqrt(prob.cost(cur) / static_cast<double>(trace.size()));
    return res;
}

double extracted_kt2(const MbvdParams& p, Kt2Definition def) {
    p.validate();
    if (!p.has_motional_branch()) throw DomainError("extracted_kt2: no motional branch");
    return kt2_from_freqs(1.0, std::sqrt(1.0 + p.cm / p.c0), def);
}

}  // namespace shf
