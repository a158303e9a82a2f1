#include "doctest.h"

#include "pite/analysis.hpp"
#include "pite/engine.hpp"
#include "pite/schedules.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace pite;

namespace {

constexpr double kPi = 3.14159265358979323846;

double si_quad(double x) {
    return oracle::integrate([](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }, 0.0, x,
                             5e-13);
}

double cin_quad(double x) {
    return oracle::integrate([](double t) { return t == 0.0 ? 0.0 : (1.0 - std::cos(t)) / t; },
                             0.0, x, 5e-13);
}

}  // namespace

TEST_CASE("trigonometric integrals at special points") {
    CHECK(si(0.0) == 0.0);
    CHECK(cin(0.0) == 0.0);
    CHECK(si(kPi) == doctest::Approx(1.8519370519824662).epsilon(1e-12));
    CHECK(std::abs(si(1000.0) - kPi / 2.0) < 2e-3);
    CHECK_THROWS_AS((void)ci(0.0), std::domain_error);
    CHECK_THROWS_AS((void)ci(-1.0), std::domain_error);
    CHECK_THROWS_AS((void)si(-0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)cin(-0.5), std::invalid_argument);
}

TEST_CASE("trigonometric integrals match quadrature over eight decades") {
    for (int j = 0; j <= 24; ++j) {
        double x = std::pow(10.0, -6.0 + 9.0 * j / 24.0);
        CAPTURE(x);
        CHECK(si(x) == doctest::Approx(si_quad(x)).epsilon(1e-10).scale(1.0));
        CHECK(cin(x) == doctest::Approx(cin_quad(x)).epsilon(1e-10).scale(1.0));
        CHECK(ci(x) ==
              doctest::Approx(euler_gamma + std::log(x) - cin_quad(x)).epsilon(1e-10).scale(1.0));
        // definitional identity between the two cosine integrals
        CHECK(ci(x) == doctest::Approx(euler_gamma + std::log(x) - cin(x)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("linear phase parameters anchor the per-step angles") {
    // angle at step k is a + b*k, hitting dlambda*s*dtau_min at k=1 and
    // dlambda*s*dtau_max at k=K
    const double dl = 0.7, s = 2.0, lo = 0.1, hi = 0.9;
    const int K = 9;
    LinearBoundParams p = linear_bound_params(dl, s, lo, hi, K);
    CHECK(p.a + p.b == doctest::Approx(dl * s * lo).epsilon(1e-14));
    CHECK(p.a + p.b * K == doctest::Approx(dl * s * hi).epsilon(1e-14));
    CHECK(p.K == K);
    CHECK_THROWS_AS((void)linear_bound_params(dl, s, lo, hi, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)linear_bound_params(dl, 0.0, lo, hi, K), std::invalid_argument);
    CHECK_THROWS_AS((void)linear_bound_params(dl, s, hi, lo, K), std::invalid_argument);
}

TEST_CASE("half-period counting bounds bracket the quadrature integral") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int caveats = 0;
    for (int t = 0; t < 150; ++t) {
        double a = -5.0 + 10.0 * u(rng);
        double b = 0.02 + 0.58 * u(rng);
        int K = 3 + static_cast<int>(u(rng) * 117);
        if (b * K > 20.0 * kPi) {
            K = static_cast<int>(20.0 * kPi / b);
        }
        LinearBoundParams p{a, b, K};
        LogDampingBounds bounds = log_damping_bounds(p);
        if (bounds.integral_caveat) ++caveats;
        double G = oracle::integral_ln_cos2(a, a + b * K, 1e-9) / b;
        double margin = 1e-7 * (1.0 + std::abs(G));
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(K);
        CHECK(bounds.lower <= G + margin);
        CHECK(G <= bounds.upper + margin);
        CHECK(bounds.lower <= bounds.upper + 1e-12);
    }
    CHECK(caveats == 0); // all draws kept b <= pi/4... none should flag
}

TEST_CASE("bounds approach -2K ln2 when steps sweep many half-periods") {
    LinearBoundParams p{0.3, 1e6, 10};
    LogDampingBounds bounds = log_damping_bounds(p);
    const double want = -2.0 * 10 * std::log(2.0);
    CHECK(bounds.lower == doctest::Approx(want).epsilon(1e-4));
    CHECK(bounds.upper == doctest::Approx(want).epsilon(1e-4));
    CHECK(bounds.integral_caveat); // the per-step phase is huge here
}

TEST_CASE("zero-increment bounds collapse to the exact constant-angle sum") {
    LinearBoundParams p = linear_bound_params(0.8, 2.0, 0.4, 0.4, 7);
    CHECK(p.b == 0.0);
    LogDampingBounds bounds = log_damping_bounds(p);
    CHECK(bounds.degenerate);
    const double c = std::cos(p.a);
    CHECK(bounds.lower == doctest::Approx(7.0 * std::log(c * c)).epsilon(1e-13));
    CHECK(bounds.upper == bounds.lower);
}

TEST_CASE("integral caveat flags per-step phases above pi/4") {
    CHECK_FALSE(log_damping_bounds(LinearBoundParams{0.1, 0.7, 10}).integral_caveat);
    CHECK(log_damping_bounds(LinearBoundParams{0.1, 0.8, 10}).integral_caveat);
}

TEST_CASE("bounds hold for the evolution engine's damping sums with discretization slack") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GammaParams gp = gamma_params(0.9);
    Spectrum spec;
    spec.eigenvalues = {0.0, 1.0};
    InitialWeights w;
    w.weights = {0.5, 0.5};
    for (int t = 0; t < 100; ++t) {
        double a = 2.0 * u(rng);
        double b = 0.02 + 0.48 * u(rng);
        int K = 5 + static_cast<int>(u(rng) * 95);
        double lo = (a + b) / gp.s;
        double hi = lo + (K - 1) * b / gp.s;
        Schedule sched = linear_schedule(lo, hi, K);
        RunResult r = run_pite(spec, w, sched, gp, ShiftPolicy{1.0, 0, 0.0},
                               AccumulationMode::log_space, false);
        if (!std::isfinite(r.log_damping[1])) continue; // angle hit an exact node

        LinearBoundParams p = linear_bound_params(1.0, gp.s, lo, hi, K);
        CHECK(p.a == doctest::Approx(a).epsilon(1e-9));
        CHECK(p.b == doctest::Approx(b).epsilon(1e-9));
        LogDampingBounds bounds = log_damping_bounds(p);

        double worst = 0.0;
        for (int k = 1; k <= K; ++k) {
            double c = std::cos(a + b * k);
            worst = std::max(worst, std::abs(std::log(c * c)));
        }
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(K);
        CHECK(r.log_damping[1] >= bounds.lower - 2.0 * worst);
        CHECK(r.log_damping[1] <= bounds.upper + 2.0 * worst);
    }
}

TEST_CASE("closed-form linear mean: limits, minimizer, and direct sums") {
    // vanishing phase range: the mean degenerates to cos^2(a)
    CHECK(arithmetic_mean_linear(LinearBoundParams{0.4, 0.0, 5}) ==
          doctest::Approx(std::cos(0.4) * std::cos(0.4)).epsilon(1e-14));
    CHECK(arithmetic_mean_linear(LinearBoundParams{0.0, 1e-12, 1}) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // exact minimizer of the zero-offset mean sits at half the first tan(y)=y
    // root, near but not exactly at the conventional 3pi/4 estimate
    const int K = 1000;
    auto mean_at = [&](double x) {
        return arithmetic_mean_linear(LinearBoundParams{0.0, x / K, K});
    };
    double x_star = oracle::golden_minimize(mean_at, 1.5, 3.5, 1e-12);
    CHECK(x_star == doctest::Approx(2.2467047289545321).epsilon(1e-7));
    CHECK(std::abs(x_star - 0.75 * kPi) < 0.04 * kPi);
    CHECK(std::abs(x_star - 0.75 * kPi) > 0.02 * kPi);

    // the closed form tracks the direct average to O(1/K)
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        double a = 3.0 * u(rng);
        double b = 0.002 + 0.3 * u(rng);
        const int n = 200;
        double direct = 0.0;
        for (int k = 1; k <= n; ++k) {
            double c = std::cos(a + b * k);
            direct += c * c;
        }
        direct /= n;
        double closed = arithmetic_mean_linear(LinearBoundParams{a, b, n});
        CHECK(std::abs(direct - closed) <= 5.0 / n);
    }
}

TEST_CASE("closed-form exponential mean: limits and degeneracies") {
    // wide phase range: oscillations average out to 1/2
    ExpMeanParams wide;
    wide.alpha = 501.0;
    wide.beta = 500.0;
    wide.kappa_bar = 0.5;
    wide.kappa = 50.0;
    ExpMeanResult r = arithmetic_mean_exponential(wide);
    CHECK(std::abs(r.mean - 0.5) < 0.01);
    CHECK(r.amplitude < 0.02);

    // fast ramp: every step sits near dtau_max, so the mean approaches cos^2(alpha)
    ExpMeanParams fast = exp_mean_params(1.0, 1.0, 0.4, 0.9, 200, 0.002);
    ExpMeanResult rf = arithmetic_mean_exponential(fast);
    CHECK(std::abs(rf.mean - std::cos(0.9) * std::cos(0.9)) < 0.01);

    // zero range degenerates exactly
    ExpMeanParams flat = exp_mean_params(1.0, 1.0, 0.7, 0.7, 50, 0.5);
    ExpMeanResult rz = arithmetic_mean_exponential(flat);
    CHECK(rz.mean == doctest::Approx(std::cos(0.7) * std::cos(0.7)).epsilon(1e-14));
    CHECK(rz.amplitude == 1.0);
    CHECK(rz.phase == 0.0);

    // amplitude/phase condense the two quadratures consistently
    ExpMeanParams p = exp_mean_params(0.9, 2.0, 0.1, 1.3, 150, 0.5);
    ExpMeanResult rp = arithmetic_mean_exponential(p);
    CHECK(rp.phase >= 0.0);
    CHECK(rp.phase <= kPi);
    CHECK(rp.amplitude >= 0.0);
    double reconstructed = 0.5 + 0.5 * rp.amplitude * std::cos(2.0 * p.alpha - rp.phase);
    // the phase folds onto [0, pi]; the reconstruction holds when the sine
    // quadrature is nonnegative, which it is for this parameter point
    CHECK(rp.mean == doctest::Approx(reconstructed).epsilon(1e-10).scale(1.0));

    ExpMeanParams tiny = exp_mean_params(1.0, 1.0, 0.0, 1.0, 1, 1e-4);
    CHECK_THROWS_AS((void)arithmetic_mean_exponential(tiny), std::invalid_argument);
}

TEST_CASE("closed-form exponential mean tracks direct schedule averages") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double kb : {0.25, 0.5, 1.0}) {
        for (int t = 0; t < 20; ++t) {
            double beta = 0.05 + (10.0 * kPi - 0.05) * u(rng);
            double alpha = beta + 2.0 * u(rng);
            int K = t % 2 ? 100 : 400;
            Schedule sched = exponential_schedule(alpha - beta, alpha, K, kb);
            double direct = 0.0;
            for (double dt : sched.steps) {
                double c = std::cos(dt);
                direct += c * c;
            }
            direct /= K;
            ExpMeanParams p = exp_mean_params(1.0, 1.0, alpha - beta, alpha, K, kb);
            ExpMeanResult r = arithmetic_mean_exponential(p);
            CAPTURE(kb);
            CAPTURE(beta);
            CAPTURE(alpha);
            CAPTURE(K);
            CHECK(std::abs(direct - r.mean) <= 5.0 / K);
        }
    }
}

TEST_CASE("step-count estimates") {
    CHECK(required_steps(0.5, 1.0, StepsVariant::limit) == 0);
    CHECK(required_steps(0.5, 1e-6, StepsVariant::limit) == 10);
    CHECK(required_steps_raw(0.5, 1e-6, StepsVariant::limit) ==
          doctest::Approx(9.9657842846620870).epsilon(1e-13));
    // the window bound costs exactly three times the half-period limit
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int t = 0; t < 50; ++t) {
        double w1 = u(rng), eps = std::pow(10.0, -6.0 * u(rng));
        CHECK(required_steps_raw(w1, eps, StepsVariant::cos2_bound) ==
              doctest::Approx(3.0 * required_steps_raw(w1, eps, StepsVariant::limit))
                  .epsilon(1e-12)
                  .scale(1.0));
    }
    CHECK(required_steps(1.0, 1e-6, StepsVariant::limit) == 0); // already pure
    CHECK(required_steps(0.9999, 10.0, StepsVariant::limit) == 0); // target was easier than the start
    CHECK_THROWS_AS((void)required_steps(0.0, 1e-6, StepsVariant::limit), std::invalid_argument);
    CHECK_THROWS_AS((void)required_steps(0.5, 0.0, StepsVariant::limit), std::invalid_argument);
}

TEST_CASE("imaginary-time estimates for ramped and constant schedules") {
    // s*dlambda = 1: ln(10^6)/(4 ln 2)
    CHECK(required_tau_schedule(0.5, 2.0, 0.5, 1e-6, TauVariant::linear_exp) ==
          doctest::Approx(4.9828921423310435).epsilon(1e-13));
    // the constant-schedule variant has no s factor and uses the top of the
    // spectrum, so the ratio of the two is s*dlambda_min/dlambda_max
    const double s = 2.0647416048350559, dl_min = 0.4, dl_max = 5.0;
    double t_lin = required_tau_schedule(dl_min, s, 0.25, 1e-4, TauVariant::linear_exp);
    double t_con = required_tau_schedule(dl_max, s, 0.25, 1e-4, TauVariant::constant);
    CHECK(t_con / t_lin == doctest::Approx(s * dl_min / dl_max).epsilon(1e-12));
    // boundary: a target no harder than the start needs no time
    CHECK(required_tau_schedule(1.0, 1.0, 0.6, 0.7, TauVariant::linear_exp) == 0.0);
    CHECK_THROWS_AS((void)required_tau_schedule(0.0, 1.0, 0.5, 1e-4, TauVariant::linear_exp),
                    std::invalid_argument);
}

TEST_CASE("error-minimizing maximum step") {
    const double s = 2.0;
    CHECK(optimal_dtau_max(0.5, s, ScheduleKind::linear) ==
          doctest::Approx(0.62 * kPi / (s * 0.5)).epsilon(1e-14));
    // exponential: inverts the final-step formula so dtau_K lands on 0.5*pi/(s*dlambda)
    const int K = 200;
    const double kb = 1.0;
    double dmax = optimal_dtau_max(0.5, s, ScheduleKind::exponential, K, kb);
    Schedule sched = exponential_schedule(0.0, dmax, K, kb);
    CHECK(sched.final_step() * s * 0.5 == doctest::Approx(0.5 * kPi).epsilon(1e-12));
    CHECK_THROWS_AS((void)optimal_dtau_max(0.5, s, ScheduleKind::exponential),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)optimal_dtau_max(0.5, s, ScheduleKind::constant),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)optimal_dtau_max(0.0, s, ScheduleKind::linear), std::invalid_argument);
}

TEST_CASE("flagging excited states that fail to damp") {
    GammaParams gp = gamma_params(0.9);
    Spectrum spec;
    spec.eigenvalues = {-1.0, -0.3, 0.4, 1.2, 2.0};

    // zero step: nothing damps relative to the ground state; every excited
    // state is flagged at ratio 1
    auto all = validity_condition(spec, 0.0, gp);
    REQUIRE(all.size() == 4);
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i].index == static_cast<int>(i + 1));
        CHECK(all[i].ratio == doctest::Approx(1.0).epsilon(1e-12));
    }

    // generic step: agree with a direct scan of the defining inequality
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        Spectrum sp = testutil::random_spectrum(rng, 6);
        double dl_max = sp.eigenvalues.back() - sp.eigenvalues.front();
        double dtau = 1.0 / (2.0 * dl_max) * (0.5 + u(rng));
        auto got = validity_condition(sp, dtau, gp);
        std::vector<int> expect;
        for (int i = 1; i < 6; ++i) {
            double dl = sp.eigenvalues[i] - sp.eigenvalues[0];
            double ratio = std::abs(std::sin(-dl * gp.s * dtau + gp.phi)) / gp.gamma;
            if (ratio >= 1.0 - 1e-12) expect.push_back(i);
        }
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].index == expect[i]);
    }

    // a node: the step factor vanishes on the excited state, so nothing is flagged
    Spectrum two;
    two.eigenvalues = {0.0, 1.0};
    double dtau_node = gp.phi / gp.s;
    CHECK(validity_condition(two, dtau_node, gp).empty());
}

TEST_CASE("constant-schedule error bound") {
    GammaParams gp = gamma_params(0.9);

    // saturated regime: ((1-w1)/w1) * 4^{-K} exactly
    for (int K : {0, 3, 17}) {
        double bound = error_upper_bound_constant(0.25, gp, 0.7, 1.0, K);
        CHECK(bound == doctest::Approx(3.0 * std::pow(0.25, K)).epsilon(1e-13));
    }

    // vanishing gap: no damping is guaranteed at all
    CHECK(error_upper_bound_constant(0.25, gp, 0.0, 1.0, 10) ==
          doctest::Approx(3.0).epsilon(1e-13));

    // the engine never exceeds the bound when the damping premise holds
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested = 0;
    while (tested < 100) {
        Spectrum sp = testutil::random_spectrum(rng, 5);
        double dl_max = sp.eigenvalues.back() - sp.eigenvalues.front();
        double dl_min = sp.eigenvalues[1] - sp.eigenvalues[0];
        double dtau = 1.0 / (2.0 * dl_max);
        if (!validity_condition(sp, dtau, gp).empty()) continue;
        ++tested;
        InitialWeights w = testutil::random_weights(rng, 5);
        int K = 5 + static_cast<int>(u(rng) * 55);
        RunResult r = run_pite(sp, w, constant_schedule(dtau, K), gp,
                               ShiftPolicy{0.0, 0, sp.eigenvalues[0]},
                               AccumulationMode::log_space, false);
        double bound = error_upper_bound_constant(w.weights[0], gp, dl_min, dl_max, K);
        CHECK(r.error_tilde <= bound * (1.0 + 1e-10));
    }
}

TEST_CASE("query-cost estimate") {
    CHECK(cost_estimate(1.0, 0.5, 1e-6) == doctest::Approx(20.0).epsilon(1e-5));
    // the estimate is d * K / ((1+eps)*w1) with K from the half-period limit
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int t = 0; t < 30; ++t) {
        double d = 0.5 + u(rng), w1 = u(rng), eps = std::pow(10.0, -5.0 * u(rng));
        double K = static_cast<double>(required_steps(w1, eps, StepsVariant::limit));
        CHECK(cost_estimate(d, w1, eps) ==
              doctest::Approx(d * K / ((1.0 + eps) * w1)).epsilon(1e-12).scale(1e-300));
    }
    // each factor-of-ten error tightening adds ln10/(2 ln2) raw steps
    double d1 = required_steps_raw(0.3, 1e-3, StepsVariant::limit);
    double d2 = required_steps_raw(0.3, 1e-4, StepsVariant::limit);
    CHECK(d2 - d1 == doctest::Approx(1.6609640474436812).epsilon(1e-12));
    CHECK_THROWS_AS((void)cost_estimate(0.0, 0.5, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS((void)cost_estimate(1.0, 1.5, 1e-3), std::invalid_argument);
}

TEST_CASE("geometric vs arithmetic damping means") {
    MeanPair equal = geometric_arithmetic_gap({0.3, 0.3, 0.3});
    CHECK(equal.geometric == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(equal.arithmetic == doctest::Approx(0.3).epsilon(1e-14));

    MeanPair extreme = geometric_arithmetic_gap({1.0, 0.0});
    CHECK(extreme.geometric == 0.0);
    CHECK(extreme.arithmetic == doctest::Approx(0.5).epsilon(1e-14));

    std::mt19937_64 rng(89);
    GammaParams gp = gamma_params(0.9);
    for (int t = 0; t < 20; ++t) {
        Spectrum sp = testutil::random_spectrum(rng, 6);
        InitialWeights w = testutil::random_weights(rng, 6);
        RunResult r = run_pite(sp, w, linear_schedule(0.01, 0.4, 50), gp,
                               ShiftPolicy{1.0, 0, sp.eigenvalues[0]},
                               AccumulationMode::log_space, false);
        MeanPair mp = geometric_arithmetic_gap(r.damping);
        CHECK(mp.geometric <= mp.arithmetic + 1e-14);
    }
    CHECK_THROWS_AS((void)geometric_arithmetic_gap({1.2}), std::invalid_argument);
    CHECK_THROWS_AS((void)geometric_arithmetic_gap({}), std::invalid_argument);
}

TEST_CASE("stationary damping centers solve tan(y) = y") {
    auto centers = damping_minimum_centers(1.0, 6.0);
    REQUIRE(centers.size() == 3);
    CHECK(centers[0] == doctest::Approx(2.2467047289545321).epsilon(1e-10));
    CHECK(centers[1] == doctest::Approx(3.8626259184688536).epsilon(1e-10));
    CHECK(centers[2] == doctest::Approx(5.4520608297144499).epsilon(1e-10));

    // halving dlambda doubles the axis positions
    auto scaled = damping_minimum_centers(0.5, 12.0);
    REQUIRE(scaled.size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(scaled[i] == doctest::Approx(2.0 * centers[i]).epsilon(1e-12));

    CHECK(damping_minimum_centers(1.0, 2.0).empty());
    CHECK_THROWS_AS((void)damping_minimum_centers(0.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS((void)damping_minimum_centers(1.0, -1.0), std::invalid_argument);
}
