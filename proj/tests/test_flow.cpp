#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cutflow/errors.hpp"
#include "cutflow/flow.hpp"

using namespace cutflow;

namespace {

double quartic_b2(double T) { return (2.0 / std::sqrt(3.0)) * std::sqrt(1.0 + std::sqrt(1.0 + 3.0 * T)); }

std::array<double, 4> quartic_two_cut_beta(double T) {
    double b1 = std::sqrt(2.0 * (1.0 + std::sqrt(T)));
    double b2 = std::sqrt(2.0 * (1.0 - std::sqrt(T)));
    return {-b1, -b2, b2, b1};
}

}  // namespace

TEST_CASE("endpoint velocities at the critical one-cut configuration") {
    for (double c : {0.1, 0.5}) {
        Potential be = Potential::bleher_eynard(c);
        double beta = 2.0 * c;
        auto v = endpoint_velocity(be, EndpointConfig::one_cut(-2.0, 2.0));
        CHECK(v[0] == doctest::Approx(-1.0 / ((beta + 2.0) * (beta + 2.0))).epsilon(1e-13));
        CHECK(v[1] == doctest::Approx(1.0 / ((beta - 2.0) * (beta - 2.0))).epsilon(1e-13));
    }
}

TEST_CASE("one-cut velocity matches the closed form's derivative") {
    Potential v = Potential::quartic_even();
    double T = 3.0;
    double b2 = quartic_b2(T);
    auto vel = endpoint_velocity(v, EndpointConfig::one_cut(-b2, b2));
    double analytic = (std::sqrt(3.0) / 2.0) / (std::sqrt(1.0 + std::sqrt(1.0 + 3.0 * T)) * std::sqrt(1.0 + 3.0 * T));
    CHECK(vel[1] == doctest::Approx(analytic).epsilon(1e-8));
    CHECK(vel[0] == doctest::Approx(-analytic).epsilon(1e-8));
}

TEST_CASE("whitham velocities") {
    Potential v = Potential::quartic_even();
    auto beta = quartic_two_cut_beta(0.25);
    auto cfg = EndpointConfig::from_span(beta);

    SUBCASE("n = 0 is minus the temperature flow") {
        auto w0 = whitham_velocity(0, v, cfg);
        auto vt = endpoint_velocity(v, cfg);
        for (int i = 0; i < 4; ++i) CHECK(w0[static_cast<std::size_t>(i)] == doctest::Approx(-vt[static_cast<std::size_t>(i)]).epsilon(1e-13));
    }
    SUBCASE("hydrodynamic ratio law") {
        auto cfg2 = EndpointConfig::two_cut(-2.1, -0.4, 0.9, 1.7);
        auto w1 = whitham_velocity(1, v, cfg2);
        for (int n : {2, 3, 4}) {
            auto wn = whitham_velocity(n, v, cfg2);
            Polynomial pn = p_k(n, cfg2);
            Polynomial p1 = p_k(1, cfg2);
            for (int i = 0; i < 4; ++i) {
                auto si = static_cast<std::size_t>(i);
                double bi = cfg2.beta[si];
                CHECK(wn[si] / w1[si] == doctest::Approx(pn(bi) / p1(bi)).epsilon(1e-10));
            }
        }
        CHECK_THROWS_AS(whitham_velocity(5, v, cfg2), DomainError);
    }
    SUBCASE("parity under index reversal") {
        // reflection maps the t_n flow to the (-1)^n t_n flow, so on a
        // symmetric configuration odd-n velocities are reversal-even and
        // even-n velocities reversal-odd
        auto w1 = whitham_velocity(1, v, cfg);
        auto w3 = whitham_velocity(3, v, cfg);
        auto w2 = whitham_velocity(2, v, cfg);
        for (int i = 0; i < 4; ++i) {
            auto si = static_cast<std::size_t>(i);
            auto ri = static_cast<std::size_t>(3 - i);
            CHECK(w1[si] == doctest::Approx(w1[ri]).epsilon(1e-11));
            CHECK(w3[si] == doctest::Approx(w3[ri]).epsilon(1e-11));
            CHECK(w2[si] == doctest::Approx(-w2[ri]).epsilon(1e-11));
        }
    }
}

TEST_CASE("closed-form seeds") {
    auto s1 = seed_quartic_even(1, 3.0);
    CHECK(s1.config.beta[1] == doctest::Approx(2.35578).epsilon(1e-5));
    CHECK_THROWS_AS(seed_quartic_even(1, 0.9), DomainError);
    auto s2 = seed_quartic_even(2, 0.25);
    CHECK(s2.config.beta[0] == doctest::Approx(-std::sqrt(3.0)));
    CHECK(s2.config.beta[1] == doctest::Approx(-1.0));
    CHECK_THROWS_AS(seed_quartic_even(2, 1.2), DomainError);
    auto bc = seed_be_critical(0.5);
    CHECK(bc.T == doctest::Approx(2.0));
    CHECK(bc.config.beta[0] == doctest::Approx(-2.0));
    CHECK_THROWS_AS(seed_be_critical(1.2), DomainError);
}

TEST_CASE("be_minimum") {
    CHECK(be_minimum(0.5) == doctest::Approx(-1.26953).epsilon(1e-4));
    CHECK_THROWS_AS(be_minimum(0.0), DomainError);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uni(-0.95, 0.95);
    int done = 0;
    while (done < 50) {
        double c = uni(rng);
        if (std::fabs(c) < 1e-3) continue;
        ++done;
        double b = be_minimum(c);
        double cubic = b * b * b - 4.0 * c * b * b + 2.0 * (2.0 * c * c - 1.0) * b + 8.0 * c;
        CHECK(std::fabs(cubic) < 1e-12);
    }
}

TEST_CASE("integration reproduces the quartic closed forms") {
    Potential v = Potential::quartic_even();
    SUBCASE("one cut, upward and downward") {
        auto out = integrate(v, seed_quartic_even(1, 2.0), 3.0);
        CHECK(out.trajectory.cause == StopCause::RangeEnd);
        CHECK_FALSE(out.event.has_value());
        double worst = 0.0;
        for (const auto& st : out.trajectory.samples)
            worst = std::max(worst, std::fabs(st.config.beta[1] - quartic_b2(st.T)));
        CHECK(worst < 1e-8);

        auto down = integrate(v, seed_quartic_even(1, 2.0), 1.05);
        CHECK(down.trajectory.cause == StopCause::RangeEnd);
        worst = 0.0;
        for (const auto& st : down.trajectory.samples)
            worst = std::max(worst, std::fabs(st.config.beta[1] - quartic_b2(st.T)));
        CHECK(worst < 1e-8);
    }
    SUBCASE("two cuts, down to low temperature") {
        auto out = integrate(v, seed_quartic_even(2, 0.25), 0.05);
        CHECK(out.trajectory.cause == StopCause::RangeEnd);
        double worst = 0.0;
        for (const auto& st : out.trajectory.samples) {
            auto expect = quartic_two_cut_beta(st.T);
            for (int i = 0; i < 4; ++i)
                worst = std::max(worst, std::fabs(st.config.beta[static_cast<std::size_t>(i)] -
                                                  expect[static_cast<std::size_t>(i)]));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("gap collapse detects the quartic merge") {
    Potential v = Potential::quartic_even();
    auto out = integrate(v, seed_quartic_even(2, 0.25), 1.5);
    CHECK(out.trajectory.cause == StopCause::Event);
    REQUIRE(out.event.has_value());
    const auto& ev = *out.event;
    CHECK(ev.kind == TransitionKind::Merge);
    CHECK(ev.t_c == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::fabs(ev.beta) < 1e-6);
    CHECK(ev.pair == 2);
    CHECK(ev.config_reduced.s == 1);
    CHECK(ev.config_reduced.beta[0] == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(ev.config_reduced.beta[1] == doctest::Approx(2.0).epsilon(1e-7));
    // gap amplitude: 4/sqrt(4 - beta^2) = 2 at beta = 0
    CHECK(ev.pair_amplitude == doctest::Approx(2.0).epsilon(0.02));
    CHECK(ev.pair_amplitude_theory == doctest::Approx(2.0).epsilon(1e-9));

    // hodograph constraints hold along the whole trajectory
    for (std::size_t i = 0; i < out.trajectory.samples.size(); i += 7) {
        const auto& st = out.trajectory.samples[i];
        auto r = hodograph_residual(v, st.T, st.config);
        for (double ri : r) CHECK(std::fabs(ri) < 1e-6);
    }
}

TEST_CASE("merge launch matches the square-root law and is C1") {
    Potential be = Potential::bleher_eynard(0.5);
    FlowState crit = seed_be_critical(0.5);
    TransitionEvent ev;
    ev.kind = TransitionKind::Merge;
    ev.t_c = 2.0;
    ev.beta = 1.0;
    ev.pair = 2;
    ev.config_reduced = crit.config;
    ev.config_degenerate = EndpointConfig::from_span(std::vector<double>{-2.0, 1.0, 1.0, 2.0});
    ev.pair_amplitude_theory = 4.0 / std::sqrt(3.0);
    ev.pair_amplitude = ev.pair_amplitude_theory;

    for (double t : {1e-6, 1e-4}) {
        FlowState below = critical_launch(be, ev, LaunchSide::Below, t);
        CHECK(below.config.s == 2);
        double d = 2.0 * std::sqrt(t) / std::sqrt(3.0);
        CHECK(below.config.beta[1] == doctest::Approx(1.0 - d).epsilon(0.05));
        CHECK(below.config.beta[2] == doctest::Approx(1.0 + d).epsilon(0.05));
        auto r = hodograph_residual(be, below.T, below.config);
        for (double ri : r) CHECK(std::fabs(ri) < 1e-8);

        // C1 matching of the surviving endpoints
        auto vred = endpoint_velocity(be, ev.config_reduced);
        CHECK(std::fabs(below.config.beta[0] - (-2.0 - vred[0] * t)) < 1e-6);
        CHECK(std::fabs(below.config.beta[3] - (2.0 - vred[1] * t)) < 1e-6);
        CHECK(std::fabs(below.velocity[0] - vred[0]) < 1e-3 * std::max(1.0, std::fabs(vred[0])));
        CHECK(std::fabs(below.velocity[3] - vred[1]) < 1e-3 * std::max(1.0, std::fabs(vred[1])));
    }

    FlowState above = critical_launch(be, ev, LaunchSide::Above, 1e-6);
    CHECK(above.config.s == 1);
    auto r = hodograph_residual(be, above.T, above.config);
    for (double ri : r) CHECK(std::fabs(ri) < 1e-10);

    CHECK_THROWS_AS(critical_launch(be, ev, LaunchSide::Below, 0.0), DomainError);
    CHECK_THROWS_AS(critical_launch(be, ev, LaunchSide::Below, 1.0), DomainError);
}

TEST_CASE("the asymmetric model: birth of a cut") {
    Potential be = Potential::bleher_eynard(0.5);
    FlowState crit = seed_be_critical(0.5);

    // synthesize the merge event at T_c = 2 and launch the two-cut side
    TransitionEvent merge;
    merge.kind = TransitionKind::Merge;
    merge.t_c = 2.0;
    merge.beta = 1.0;
    merge.pair = 2;
    merge.config_reduced = crit.config;
    merge.config_degenerate = EndpointConfig::from_span(std::vector<double>{-2.0, 1.0, 1.0, 2.0});
    merge.pair_amplitude_theory = 4.0 / std::sqrt(3.0);
    merge.pair_amplitude = merge.pair_amplitude_theory;

    FlowState below = critical_launch(be, merge, LaunchSide::Below, 1e-6);
    auto out = integrate(be, below, 0.05);
    CHECK(out.trajectory.cause == StopCause::Event);
    REQUIRE(out.event.has_value());
    const auto& birth = *out.event;
    CHECK(birth.kind == TransitionKind::Birth);
    CHECK(birth.pair == 3);
    CHECK(birth.t_c == doctest::Approx(1.845097).epsilon(1.1e-4));
    CHECK(birth.beta == doctest::Approx(1.67195).epsilon(1e-4));
    CHECK(birth.gamma == doctest::Approx(3.9221).epsilon(1e-3));
    CHECK(birth.config_reduced.beta[0] == doctest::Approx(-1.98200).epsilon(1e-4));
    CHECK(birth.config_reduced.beta[1] == doctest::Approx(0.55177).epsilon(1e-4));

    // birth launches on both sides
    FlowState two_cut = critical_launch(be, birth, LaunchSide::Above, 1e-6);
    CHECK(two_cut.config.s == 2);
    auto r = hodograph_residual(be, two_cut.T, two_cut.config);
    for (double ri : r) CHECK(std::fabs(ri) < 1e-8);
    double width = two_cut.config.beta[3] - two_cut.config.beta[2];
    double predicted = 2.0 * std::sqrt(-2.0 * birth.gamma * 1e-6 / std::log(1e-6));
    CHECK(width == doctest::Approx(predicted).epsilon(0.1));

    FlowState one_cut = critical_launch(be, birth, LaunchSide::Below, 1e-6);
    CHECK(one_cut.config.s == 1);
    auto r1 = hodograph_residual(be, one_cut.T, one_cut.config);
    for (double ri : r1) CHECK(std::fabs(ri) < 1e-10);
}

TEST_CASE("full traces") {
    SUBCASE("quartic even over (0.1, 2)") {
        Potential v = Potential::quartic_even();
        FlowState seed = seed_quartic_even(2, 0.1);
        auto tr = trace(v, seed, 0.1, 2.0);
        REQUIRE(tr.events.size() == 1);
        CHECK(tr.events[0].kind == TransitionKind::Merge);
        CHECK(tr.events[0].t_c == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(tr.segments.size() == 2);
        // endpoints match the closed forms columnwise
        auto cfg = tr.config_at(v, 1.7);
        CHECK(cfg.s == 1);
        CHECK(cfg.beta[1] == doctest::Approx(quartic_b2(1.7)).epsilon(1e-8));
        auto cfg2 = tr.config_at(v, 0.4);
        CHECK(cfg2.s == 2);
        CHECK(cfg2.beta[2] == doctest::Approx(std::sqrt(2.0 * (1.0 - std::sqrt(0.4)))).epsilon(1e-7));
    }
    SUBCASE("asymmetric model over (0.05, 3)") {
        Potential be = Potential::bleher_eynard(0.5);
        auto tr = trace(be, seed_be_critical(0.5), 0.05, 3.0);
        REQUIRE(tr.events.size() == 2);
        CHECK(tr.events[0].kind == TransitionKind::Birth);
        CHECK(tr.events[0].t_c == doctest::Approx(1.845097).epsilon(1.1e-4));
        CHECK(tr.events[1].kind == TransitionKind::Merge);
        CHECK(tr.events[1].t_c == doctest::Approx(2.0).epsilon(1e-9));
        REQUIRE(tr.segments.size() == 3);
        // one-cut continuation reaches the potential minimum as T -> 0
        const auto& low = tr.segments.front();
        CHECK(low.s == 1);
        double mid = 0.5 * (low.samples.back().config.beta[0] + low.samples.back().config.beta[1]);
        // at T = 0.05 the support is still a small interval around beta_min
        CHECK(mid == doctest::Approx(be_minimum(0.5)).epsilon(0.02));

        // independent estimate of the birth temperature from the exterior
        // inequality margin on the one-cut side
        double t_margin = birth_from_margin(be, low, tr.events[0].t_c);
        CHECK(std::fabs(t_margin - tr.events[0].t_c) < 1e-3);
    }
    SUBCASE("symmetric limit: no birth") {
        Potential v = Potential::quartic_even();
        auto tr = trace(v, seed_be_critical(0.0), 0.05, 1.5);
        REQUIRE(tr.events.size() == 1);  // only the merge at T = 1
        CHECK(tr.events[0].t_c == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(tr.segments.size() == 2);
        CHECK(tr.segments.front().s == 2);
        CHECK(tr.segments.front().cause == StopCause::RangeEnd);
    }
}

TEST_CASE("trajectory symmetry of the even potential") {
    Potential v = Potential::quartic_even();
    auto out = integrate(v, seed_quartic_even(2, 0.25), 0.6);
    for (std::size_t i = 0; i < out.trajectory.samples.size(); i += 5) {
        const auto& b = out.trajectory.samples[i].config.beta;
        CHECK(b[0] == doctest::Approx(-b[3]).epsilon(1e-9));
        CHECK(b[1] == doctest::Approx(-b[2]).epsilon(1e-9));
    }
}
