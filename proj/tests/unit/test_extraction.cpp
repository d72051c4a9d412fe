#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shf/errors.hpp"
#include "shf/extraction.hpp"

using namespace shf;

namespace {

MbvdParams truth() { return from_targets({5.31e9, 0.239, 101.0, 1250e-15, 7.7, 1.5}); }

AdmittanceTrace reference_trace(std::size_t n = 2001) {
    return synthesize_trace(truth(), linear_grid(3e9, 7e9, n));
}

void expect_rel(double got, double want, double tol, const char* what) {
    EXPECT_NEAR(got / want, 1.0, tol) << what << ": got " << got << " want " << want;
}

}  // namespace

TEST(S11ToAdmittance, Examples) {
    EXPECT_NEAR(std::abs(s11_to_admittance(0.0, 50.0) - cplx{0.02}), 0.0, 1e-16);
    EXPECT_EQ(s11_to_admittance(1.0, 50.0), cplx{0.0});
    const cplx y = s11_to_admittance({0.0, 1.0}, 50.0);
    EXPECT_NEAR(y.real(), 0.0, 1e-16);
    EXPECT_NEAR(y.imag(), -0.02, 1e-16);
    EXPECT_THROW(s11_to_admittance(-1.0, 50.0), DomainError);
    EXPECT_THROW(s11_to_admittance(0.0, 0.0), DomainError);
}

TEST(S11ToAdmittance, InverseRoundTrip) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int i = 0; i < 1000; ++i) {
        const cplx y{std::abs(g(rng)) * 0.05, g(rng) * 0.05};
        const cplx back = s11_to_admittance(admittance_to_s11(y, 50.0), 50.0);
        ASSERT_NEAR(std::abs(back - y), 0.0, 1e-14 + 1e-12 * std::abs(y));
    }
}

TEST(AdmittanceTrace, Validation) {
    AdmittanceTrace t = reference_trace(16);
    EXPECT_NO_THROW(t.validate());
    t.freqs[3] = t.freqs[2];
    EXPECT_THROW(t.validate(), DomainError);
    t = reference_trace(7);
    EXPECT_THROW(t.validate(), DomainError);
    t = reference_trace(16);
    t.values.pop_back();
    EXPECT_THROW(t.validate(), DomainError);
}

TEST(InitialGuess, FindsSeriesResonanceWithinOneStep) {
    MbvdParams p = truth();
    p.rs = p.r0 = 0.0;
    const auto lossless_port = synthesize_trace(p, linear_grid(3e9, 7e9, 2001));
    const MbvdParams g0 = initial_guess(lossless_port);
    const double step = lossless_port.freqs[1] - lossless_port.freqs[0];
    EXPECT_LE(std::abs(1.0 / (2 * std::numbers::pi * std::sqrt(g0.lm * g0.cm)) - 5.31e9), step);

    // Series resistance pulls the |Y| peak below fs.
    const auto t = reference_trace();
    const MbvdParams g = initial_guess(t);
    const double fs = 1.0 / (2 * std::numbers::pi * std::sqrt(g.lm * g.cm));
    EXPECT_NEAR(fs / 5.31e9, 1.0, 5e-3);
    EXPECT_GT(g.c0, 0.0);
    EXPECT_GT(g.rm, 0.0);
    EXPECT_EQ(g.r0, 0.0);
}

TEST(InitialGuess, PureCapacitorHasNoResonance) {
    const auto t = synthesize_trace({1250e-15, 0, 0, 0, 0, 0}, linear_grid(3e9, 7e9, 101));
    EXPECT_THROW(initial_guess(t), NumericalError);
}

TEST(InitialGuess, AntiResonanceOutsideGrid) {
    const auto t = synthesize_trace(truth(), linear_grid(3e9, 5.8e9, 501));
    EXPECT_THROW(initial_guess(t), NumericalError);
}

TEST(Jacobian, AnalyticMatchesCentralDifferences) {
    const MbvdParams p = truth();
    const double h = 1e-6;
    for (double f : {3e9, 5.0e9, 5.31e9, 5.6e9, 5.92e9, 7e9}) {
        const auto g = detail::admittance_log_gradient(p, f);
        for (int k = 0; k < detail::kNumFitParams; ++k) {
            MbvdParams up = p, dn = p;
            double* u[] = {&up.c0, &up.cm, &up.lm, &up.rm, &up.rs, &up.r0};
            double* d[] = {&dn.c0, &dn.cm, &dn.lm, &dn.rm, &dn.rs, &dn.r0};
            *u[k] *= std::exp(h);
            *d[k] *= std::exp(-h);
            const cplx fd = (synth_admittance(up, f) - synth_admittance(dn, f)) / (2 * h);
            const cplx an = g[static_cast<std::size_t>(k)];
            ASSERT_LT(std::abs(an - fd), 1e-5 * std::abs(synth_admittance(p, f)) + 1e-5 * std::abs(fd))
                << "f=" << f << " k=" << k;
        }
    }
}

TEST(FitMbvd, NoiselessRecoveryFromSeed) {
    const auto t = reference_trace();
    const FitResult r = fit_mbvd(t, initial_guess(t));
    ASSERT_TRUE(r.converged) << r.stop_reason;
    const MbvdParams p = truth();
    expect_rel(r.params.c0, p.c0, 1e-3, "c0");
    expect_rel(r.params.cm, p.cm, 1e-3, "cm");
    expect_rel(r.params.lm, p.lm, 1e-3, "lm");
    expect_rel(r.params.rm, p.rm, 1e-3, "rm");
    expect_rel(r.params.rs, p.rs, 1e-3, "rs");
    expect_rel(r.params.r0, p.r0, 1e-3, "r0");
    EXPECT_LT(r.residual, 1e-8);
}

TEST(FitMbvd, FiniteDifferenceJacobianAgrees) {
    const auto t = reference_trace(401);
    FitOptions o;
    o.analytic_jacobian = false;
    const FitResult r = fit_mbvd(t, initial_guess(t), o);
    ASSERT_TRUE(r.converged);
    expect_rel(extracted_kt2(r.params), 0.239, 1e-6, "kt2");
}

TEST(FitMbvd, IdempotentFromTruth) {
    const auto t = reference_trace();
    const FitResult r = fit_mbvd(t, truth());
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 5);
    EXPECT_LT(r.residual, 1e-12);
}

TEST(FitMbvd, CostNeverIncreases) {
    auto t = reference_trace();
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    for (auto& y : t.values) y *= cplx{1.0 + 0.01 * g(rng), 0.01 * g(rng)};
    const FitResult r = fit_mbvd(t, initial_guess(t));
    ASSERT_GE(r.accepted_costs.size(), 2u);
    for (std::size_t i = 1; i < r.accepted_costs.size(); ++i)
        EXPECT_LE(r.accepted_costs[i], r.accepted_costs[i - 1]);
}

TEST(FitMbvd, FrequencyScaledTrace) {
    for (double s : {0.5, 2.0, 3.7}) {
        MbvdParams p = truth();
        p.lm /= s * s;  // fs -> s fs
        auto grid = linear_grid(3e9 * s, 7e9 * s, 2001);
        const auto t = synthesize_trace(p, grid);
        const FitResult r = fit_mbvd(t, initial_guess(t));
        const double fs = 1.0 / (2 * std::numbers::pi * std::sqrt(r.params.lm * r.params.cm));
        EXPECT_NEAR(fs / (5.31e9 * s), 1.0, 1e-3) << "s=" << s;
    }
}

TEST(FitMbvd, GridHalvingLeavesKt2Unchanged) {
    std::size_t n = 2001;
    const auto t0 = reference_trace(n);
    const double k0 = extracted_kt2(fit_mbvd(t0, initial_guess(t0)).params);
    while (n / 2 >= 64) {
        n = n / 2 + 1;
        const auto t = reference_trace(n);
        const double k = extracted_kt2(fit_mbvd(t, initial_guess(t)).params);
        EXPECT_LT(std::abs(k - k0), 1e-3) << "n=" << n;
    }
}

TEST(FitMbvd, RejectsInitWithoutMotionalBranch) {
    const auto t = reference_trace(101);
    EXPECT_THROW(fit_mbvd(t, {1250e-15, 0, 0, 0, 1, 1}), DomainError);
}

TEST(FitMbvd, SnapsTinyResistancesToZero) {
    MbvdParams p = truth();
    p.r0 = 0.0;
    const auto t = synthesize_trace(p, linear_grid(3e9, 7e9, 801));
    const FitResult r = fit_mbvd(t, initial_guess(t));
    EXPECT_EQ(r.params.r0, 0.0);
    EXPECT_NEAR(r.params.rs / 7.7, 1.0, 1e-3);
}

TEST(FitMbvd, IterationLimitReportsNotConverged) {
    const auto t = reference_trace(401);
    FitOptions o;
    o.max_iterations = 1;
    const FitResult r = fit_mbvd(t, initial_guess(t), o);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.stop_reason, "iteration limit");
}
