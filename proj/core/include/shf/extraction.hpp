#pragma once

#include <string>
#include <vector>

#include "shf/mat2.hpp"
#include "shf/mbvd.hpp"

namespace shf {

/// One-port admittance samples on a strictly increasing frequency grid.
struct AdmittanceTrace {
    std::vector<double> freqs;   ///< Hz
    std::vector<cplx> values;    ///< S
    double ref_impedance = 50.0; ///< ohm; meaningful when converted from S11

    static constexpr std::size_t kMinPoints = 8;

    std::size_t size() const { return freqs.size(); }
    void validate() const;
};

/// Samples synth_admittance(p, .) on `freqs`.
AdmittanceTrace synthesize_trace(const MbvdParams& p, std::vector<double> freqs);

/// n points, uniformly spaced over [f_lo, f_hi].
std::vector<double> linear_grid(double f_lo, double f_hi, std::size_t n);

/// Y = (1 / z_ref) (1 - s11) / (1 + s11).
cplx s11_to_admittance(cplx s11, double z_ref);
cplx admittance_to_s11(cplx y, double z_ref);

MbvdParams initial_guess(const AdmittanceTrace& trace);

struct FitOptions {
    int max_iterations = 200;
    double rel_cost_tol = 1e-10;
    double lambda0 = 1e-3;
    double resistance_floor = 1e-6;  ///< ohm, applied during the search
    double snap_to_zero = 1e-3;      ///< ohm, fitted resistances below this become 0
    bool analytic_jacobian = true;
    double fd_rel_step = 1e-6;
};

struct FitResult {
    MbvdParams params;
    double residual = 0.0;  ///< sqrt(cost / N), cost = sum |Ym - Y|^2 / |Y|^2
    int iterations = 0;
    bool converged = false;
    std::string stop_reason;
    std::vector<double> accepted_costs;  ///< cost after the seed and each accepted step
};

/// Damped least squares on log-parameters. Throws DomainError for an invalid
/// init or trace and NumericalError if the model turns non-finite.
FitResult fit_mbvd(const AdmittanceTrace& trace, const MbvdParams& init,
                   const FitOptions& opts = {});

/// Lossless-fp coupling of a fitted element set, the quantity from_targets inverts.
double extracted_kt2(const MbvdParams& p, Kt2Definition def = kDefaultKt2Definition);

namespace detail {

inline constexpr int kNumFitParams = 6;  // c0, cm, lm, rm, rs, r0

/// d Y / d ln(x_k) at one frequency, k in fit-parameter order.
std::array<cplx, kNumFitParams> admittance_log_gradient(const MbvdParams& p, double freq_hz);

}  // namespace detail

}  // namespace shf
