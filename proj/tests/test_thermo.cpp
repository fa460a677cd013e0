#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cutflow/errors.hpp"
#include "cutflow/thermo.hpp"
#include "oracles.hpp"

using namespace cutflow;

namespace {

EndpointConfig quartic_one_cut(double T) {
    double b = (2.0 / std::sqrt(3.0)) * std::sqrt(1.0 + std::sqrt(1.0 + 3.0 * T));
    return EndpointConfig::one_cut(-b, b);
}

const Potential& quartic() {
    static Potential v = Potential::quartic_even();
    return v;
}

}  // namespace

TEST_CASE("v1 is constant on the support") {
    auto cfg = quartic_one_cut(2.0);
    double ref = lagrange_multiplier(quartic(), 2.0, cfg);
    for (double frac : {-0.8, -0.35, 0.2, 0.55, 0.9}) {
        double x = frac * cfg.beta[1];
        CHECK(lagrange_multiplier_at(quartic(), 2.0, cfg, x) == doctest::Approx(ref).epsilon(1e-7));
    }

    // two-cut configuration as well
    Potential be = Potential::bleher_eynard(0.5);
    auto cfg2 = EndpointConfig::two_cut(-1.98861483169793, 0.646153112749956, 1.43059864582094,
                                        1.86987178988065);
    double r2 = lagrange_multiplier(be, 1.9, cfg2);
    CHECK(lagrange_multiplier_at(be, 1.9, cfg2, -1.2) == doctest::Approx(r2).epsilon(1e-7));
    CHECK(lagrange_multiplier_at(be, 1.9, cfg2, 1.7) == doctest::Approx(r2).epsilon(1e-7));
}

TEST_CASE("v1 against a brute-force quadrature at the critical quartic point") {
    // T = 1, support (-2,2): v1 = -(1/pi) int x^2 sqrt(4-x^2) log|x| dx
    auto cfg = EndpointConfig::one_cut(-2.0, 2.0);
    double direct = -2.0 / std::numbers::pi *
                    oracles::adaptive_simpson(
                        [](double x) {
                            if (x <= 0.0) return 0.0;
                            return x * x * std::sqrt(4.0 - x * x) * std::log(x);
                        },
                        0.0, 2.0, 1e-12);
    CHECK(lagrange_multiplier_at(quartic(), 1.0, cfg, 1e-12) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("dF/dT = -v1") {
    for (double T : {1.6, 2.5}) {
        double h = 1e-3;
        double fp = free_energy(quartic(), T + h, quartic_one_cut(T + h));
        double fm = free_energy(quartic(), T - h, quartic_one_cut(T - h));
        double v1 = lagrange_multiplier(quartic(), T, quartic_one_cut(T));
        CHECK((fp - fm) / (2.0 * h) == doctest::Approx(-v1).epsilon(1e-5));
    }
}

TEST_CASE("free energy equals the double-log form") {
    // F = -T int V rho + T^2 int int log|x-y| rho rho, by iterated
    // singular quadrature
    double T = 2.0;
    auto cfg = quartic_one_cut(T);
    double a = cfg.beta[0], b = cfg.beta[1];
    auto rho = [&](double x) {
        double h = x * x + a * a / 2.0 - 2.0;  // h(z) = z^2 + b1^2/2 - 2
        return h * std::sqrt((x - a) * (b - x)) / (2.0 * std::numbers::pi * T);
    };
    double v_rho = oracles::adaptive_simpson(
        [&](double th) {
            double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(th);
            double jac = 0.5 * (b - a) * std::sin(th);
            return quartic()(x) * rho(x) * jac;
        },
        0.0, std::numbers::pi, 1e-12);
    double loglog = oracles::adaptive_simpson(
        [&](double th) {
            double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(th);
            double jac = 0.5 * (b - a) * std::sin(th);
            double inner = oracles::adaptive_simpson(
                [&](double ph) {
                    double y = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(ph);
                    double jy = 0.5 * (b - a) * std::sin(ph);
                    if (y == x) return 0.0;
                    return rho(y) * std::log(std::fabs(x - y)) * jy;
                },
                0.0, std::numbers::pi, 1e-10, 30);
            return rho(x) * inner * jac;
        },
        0.0, std::numbers::pi, 1e-8, 24);
    double f_double = -T * v_rho + T * T * loglog;
    CHECK(free_energy(quartic(), T, cfg) == doctest::Approx(f_double).epsilon(1e-6));
}

TEST_CASE("specific heat of the one-cut phase") {
    CHECK(specific_heat_one_cut(EndpointConfig::one_cut(-2.0, 2.0)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(specific_heat_one_cut(EndpointConfig::two_cut(-2, -1, 1, 2)), DomainError);

    double T = 3.0;
    auto cfg = quartic_one_cut(T);
    double formula = specific_heat_one_cut(cfg);
    CHECK(formula == doctest::Approx(2.0 * std::log(2.0 * 2.35578 / 4.0)).epsilon(1e-4));

    // finite-difference cross-check through v1' (d2F = -dv1/dT)
    double h = 1e-3;
    double vp = lagrange_multiplier(quartic(), T + h, quartic_one_cut(T + h));
    double vm = lagrange_multiplier(quartic(), T - h, quartic_one_cut(T - h));
    CHECK(formula == doctest::Approx(-(vp - vm) / (2.0 * h)).epsilon(1e-4));

    // zero at the merge: the critical support has width 4
    CHECK(specific_heat_one_cut(quartic_one_cut(1.0 + 1e-12)) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("third-derivative jump across the merge") {
    SUBCASE("symmetric quartic: 1/4") {
        Potential v = quartic();
        auto out = integrate(v, seed_quartic_even(2, 0.9), 1.5);
        REQUIRE(out.event.has_value());
        auto rep = third_derivative_jump(v, *out.event);
        CHECK(rep.closed_form_valid);
        CHECK(rep.closed_form == doctest::Approx(0.25).epsilon(1e-6));
        CHECK(rep.numeric == doctest::Approx(0.25).epsilon(0.05));
        CHECK(rep.numeric_f_stencil == doctest::Approx(0.25).epsilon(0.05));
    }
    SUBCASE("asymmetric c = 1/2: 4/9") {
        Potential be = Potential::bleher_eynard(0.5);
        auto tr = trace(be, seed_be_critical(0.5), 1.7, 2.3);
        REQUIRE(tr.events.size() >= 1);
        const auto& merge = tr.events.back();
        REQUIRE(merge.kind == TransitionKind::Merge);
        auto rep = third_derivative_jump(be, merge);
        CHECK(rep.closed_form_valid);
        CHECK(rep.closed_form == doctest::Approx(4.0 / 9.0).epsilon(1e-6));
        CHECK(rep.numeric == doctest::Approx(4.0 / 9.0).epsilon(0.05));
        CHECK(rep.numeric_f_stencil == doctest::Approx(4.0 / 9.0).epsilon(0.05));
    }
    SUBCASE("birth events are rejected") {
        Potential be = Potential::bleher_eynard(0.5);
        TransitionEvent ev;
        ev.kind = TransitionKind::Birth;
        CHECK_THROWS_AS(third_derivative_jump(be, ev), DomainError);
    }
}

TEST_CASE("thermo curve bookkeeping") {
    Potential v = quartic();
    auto tr = trace(v, seed_quartic_even(2, 0.5), 0.5, 2.0);
    auto curve = thermo_curve(v, tr, 0.6, 1.9, 14);
    REQUIRE(curve.samples.size() == 14);
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const auto& s = curve.samples[i];
        CHECK(std::isfinite(s.F));
        CHECK(std::isfinite(s.d3F));
        if (s.T > 1.0 + 0.05) {
            // one-cut region: d2F matches the closed form
            auto cfg = tr.config_at(v, s.T);
            CHECK(s.d2F == doctest::Approx(specific_heat_one_cut(cfg)).epsilon(1e-4));
        }
    }
}
