#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cutflow/equilibrium.hpp"
#include "cutflow/errors.hpp"
#include "oracles.hpp"

using namespace cutflow;
constexpr double kPi = std::numbers::pi;

namespace {

EndpointConfig quartic_one_cut(double T) {
    double b = (2.0 / std::sqrt(3.0)) * std::sqrt(1.0 + std::sqrt(1.0 + 3.0 * T));
    return EndpointConfig::one_cut(-b, b);
}

EndpointConfig quartic_two_cut(double T) {
    double b1 = std::sqrt(2.0 * (1.0 + std::sqrt(T)));
    double b2 = std::sqrt(2.0 * (1.0 - std::sqrt(T)));
    return EndpointConfig::two_cut(-b1, -b2, b2, b1);
}

}  // namespace

TEST_CASE("density values") {
    Potential v = Potential::quartic_even();
    auto cfg = EndpointConfig::one_cut(-2.0, 2.0);  // the T = 1 critical support

    // rho(x) = x^2 sqrt(4-x^2)/(2 pi)
    CHECK(density_at(v, 1.0, cfg, 1.0) == doctest::Approx(std::sqrt(3.0) / (2.0 * kPi)).epsilon(1e-12));
    CHECK(density_at(v, 1.0, cfg, 0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(density_at(v, 1.0, cfg, 2.5), DomainError);

    // BE critical density vanishes at x = 2c
    Potential be = Potential::bleher_eynard(0.5);
    CHECK(density_at(be, 2.0, cfg, 1.0) == doctest::Approx(0.0));
    CHECK(density_at(be, 2.0, cfg, 0.5) > 0.0);

    // parity for the even potential
    auto cfg2 = quartic_two_cut(0.25);
    for (double x : {1.05, 1.3, 1.6}) {
        CHECK(density_at(v, 0.25, cfg2, x) == doctest::Approx(density_at(v, 0.25, cfg2, -x)).epsilon(1e-12));
    }
}

TEST_CASE("density normalization") {
    Potential v = Potential::quartic_even();
    CHECK(density_norm(v, 1.0, EndpointConfig::one_cut(-2.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(density_norm(v, 0.25, quartic_two_cut(0.25)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(density_norm(v, 3.0, quartic_one_cut(3.0)) == doctest::Approx(1.0).epsilon(1e-10));
    // the norm is still a number when the configuration is not admissible;
    // flagging is the admissibility module's job
    double off = density_norm(v, 0.5, quartic_one_cut(0.5));
    CHECK(std::isfinite(off));
}

TEST_CASE("hodograph residuals at the closed-form solutions") {
    Potential v = Potential::quartic_even();
    for (double T : {1.5, 2.0, 3.0}) {
        auto r = hodograph_residual(v, T, quartic_one_cut(T));
        for (double ri : r) CHECK(std::fabs(ri) < 1e-9);
    }
    for (double T : {0.25, 0.5, 0.81}) {
        auto r = hodograph_residual(v, T, quartic_two_cut(T));
        for (double ri : r) CHECK(std::fabs(ri) < 1e-9);
    }
    Potential be = Potential::bleher_eynard(0.5);
    auto r = hodograph_residual(be, 2.0, EndpointConfig::one_cut(-2.0, 2.0));
    for (double ri : r) CHECK(std::fabs(ri) < 1e-12);
}

TEST_CASE("admissibility verdicts") {
    Potential v = Potential::quartic_even();

    auto regular = admissibility(v, 3.0, quartic_one_cut(3.0));
    CHECK(regular.verdict == AdmissibilityReport::Verdict::Regular);
    CHECK(regular.density_positive);
    CHECK(regular.h_nonvanishing_on_support);
    for (const auto& region : regular.exterior) CHECK(region.margin > 0.0);

    // below the merge the one-cut branch has h < 0 inside the support
    auto bad = admissibility(v, 0.5, quartic_one_cut(0.5));
    CHECK(bad.verdict != AdmissibilityReport::Verdict::Regular);
    CHECK_FALSE(bad.density_positive);

    // the critical configuration itself: h touches zero at the origin
    auto critical = admissibility(v, 1.0, EndpointConfig::one_cut(-2.0, 2.0));
    CHECK(critical.verdict == AdmissibilityReport::Verdict::Singular);

    // fig. 8 configuration of the asymmetric model at T = 1.9
    Potential be = Potential::bleher_eynard(0.5);
    auto cfg = EndpointConfig::two_cut(-1.98861483169793, 0.646153112749956, 1.43059864582094,
                                       1.86987178988065);
    auto rep = admissibility(be, 1.9, cfg);
    CHECK(rep.residual_max < 1e-6);
    CHECK(rep.verdict == AdmissibilityReport::Verdict::Regular);
    CHECK(rep.exterior.size() == 3);  // left, gap, right
    for (const auto& region : rep.exterior) CHECK(region.margin > 1e-4);
}

TEST_CASE("density profile is plot-ready") {
    Potential v = Potential::quartic_even();
    auto prof = density_profile(v, 0.25, quartic_two_cut(0.25), 64);
    CHECK(prof.samples.size() == 2);
    CHECK(prof.norm == doctest::Approx(1.0).epsilon(1e-8));
    for (const auto& cut : prof.samples) {
        CHECK(cut.front().second == 0.0);
        CHECK(cut.back().second == 0.0);
        for (std::size_t i = 1; i < cut.size(); ++i) CHECK(cut[i].first > cut[i - 1].first);
        for (const auto& [x, rho] : cut) CHECK(rho >= 0.0);
    }
}
