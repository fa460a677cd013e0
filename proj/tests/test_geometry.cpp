#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cutflow/elliptic.hpp"
#include "cutflow/errors.hpp"
#include "cutflow/geometry.hpp"
#include "oracles.hpp"

using namespace cutflow;

namespace {

EndpointConfig random_two_cut(std::mt19937& rng) {
    std::uniform_real_distribution<double> gap(0.2, 1.1);
    double b1 = -2.5 + 0.5 * gap(rng);
    double b2 = b1 + gap(rng);
    double b3 = b2 + gap(rng);
    double b4 = b3 + gap(rng);
    return EndpointConfig::two_cut(b1, b2, b3, b4);
}

// direct quadrature of int_gap x^j / sqrt(Q) through the cosine map
double moment_oracle(const EndpointConfig& c, int j) {
    const auto& b = c.beta;
    auto f = [&](double th) {
        double x = 0.5 * (b[1] + b[2]) - 0.5 * (b[2] - b[1]) * std::cos(th);
        return std::pow(x, j) / std::sqrt((x - b[0]) * (b[3] - x));
    };
    return oracles::adaptive_simpson(f, 0.0, std::numbers::pi, 1e-13);
}

}  // namespace

TEST_CASE("one-cut P_k closed forms") {
    double b1 = -1.7, b2 = 2.3;
    auto cfg = EndpointConfig::one_cut(b1, b2);
    Polynomial p0 = p_k_one_cut(0, cfg);
    CHECK(p0.degree() == 0);
    CHECK(p0.coeff(0) == doctest::Approx(1.0));

    Polynomial p1 = p_k_one_cut(1, cfg);
    CHECK(p1.coeff(1) == doctest::Approx(0.5));
    CHECK(p1.coeff(0) == doctest::Approx(-(b1 + b2) / 4.0));

    Polynomial p2 = p_k_one_cut(2, cfg);
    CHECK(p2.coeff(2) == doctest::Approx(1.0));
    CHECK(p2.coeff(1) == doctest::Approx(-(b1 + b2) / 2.0));
    CHECK(p2.coeff(0) == doctest::Approx(-(b1 - b2) * (b1 - b2) / 8.0));

    std::mt19937 rng(1);
    CHECK_THROWS_AS(p_k_one_cut(0, random_two_cut(rng)), DomainError);
}

TEST_CASE("two-cut P_0 matches the elliptic closed form") {
    auto cfg = EndpointConfig::two_cut(-2.0, 0.6, 1.4, 1.9);
    auto a = elliptic_args(cfg);
    Polynomial p0 = p_k_two_cut(0, cfg);
    CHECK(p0.degree() == 1);
    CHECK(p0.coeff(1) == doctest::Approx(1.0));
    double expected_c = -cfg.beta[3] + (cfg.beta[3] - cfg.beta[2]) * pi_over_k(a.r, a.s);
    CHECK(p0.coeff(0) == doctest::Approx(expected_c).epsilon(1e-12));
    // and satisfies its normalization integral
    CHECK(std::fabs(normalization_integral(p0, cfg)) < 1e-9);
}

TEST_CASE("P_1 matches the E/K closed form and quadrature") {
    std::mt19937 rng(99);
    for (int rep = 0; rep < 5; ++rep) {
        auto cfg = random_two_cut(rng);
        const auto& b = cfg.beta;
        auto a = elliptic_args(cfg);
        double eok = ellip_e(a.s) / ellip_k(a.s);
        Polynomial p1 = p_k_two_cut(1, cfg);
        CHECK(p1.coeff(2) == doctest::Approx(0.5));
        CHECK(p1.coeff(1) == doctest::Approx(-(b[0] + b[1] + b[2] + b[3]) / 4.0));
        double expected = (b[0] * b[3] + b[1] * b[2]) / 4.0 + (b[3] - b[1]) * (b[2] - b[0]) * eok / 4.0;
        CHECK(p1.coeff(0) == doctest::Approx(expected).epsilon(1e-11));
        CHECK(std::fabs(normalization_integral(p1, cfg)) < 1e-9);
    }
}

TEST_CASE("even-k normalization constants vanish on symmetric configurations") {
    auto cfg = EndpointConfig::two_cut(-1.9, -0.7, 0.7, 1.9);
    CHECK(std::fabs(c_k0_two_cut(0, cfg)) < 1e-13);
    CHECK(std::fabs(c_k0_two_cut(2, cfg)) < 1e-12);
    CHECK(std::fabs(c_k0_two_cut(4, cfg)) < 1e-12);
}

TEST_CASE("normalization integral vanishes for every P_k") {
    std::mt19937 rng(2024);
    for (int rep = 0; rep < 6; ++rep) {
        auto cfg = random_two_cut(rng);
        for (int k = 0; k <= 4; ++k) {
            CAPTURE(rep);
            CAPTURE(k);
            CHECK(std::fabs(normalization_integral(p_k_two_cut(k, cfg), cfg)) < 1e-8);
        }
    }
}

TEST_CASE("gap moment ratios against quadrature") {
    std::mt19937 rng(5150);
    for (int rep = 0; rep < 5; ++rep) {
        auto cfg = random_two_cut(rng);
        auto R = gap_moment_ratios(cfg, 6);
        double m0 = moment_oracle(cfg, 0);
        for (int j = 1; j <= 6; ++j) {
            CAPTURE(rep);
            CAPTURE(j);
            CHECK(R[static_cast<std::size_t>(j)] == doctest::Approx(moment_oracle(cfg, j) / m0).epsilon(1e-9));
        }
    }
}

TEST_CASE("center function") {
    // degenerate interior pair: Pi/K = 1 so C = beta_3
    auto cfg = EndpointConfig::two_cut(-2.0, 1.0 - 1e-15, 1.0, 2.0);
    CHECK(c_center(cfg) == doctest::Approx(1.0).epsilon(1e-9));

    // C lies strictly inside the gap
    std::mt19937 rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        auto c = random_two_cut(rng);
        double cc = c_center(c);
        CHECK(cc > c.beta[1]);
        CHECK(cc < c.beta[2]);
        // C is the root of P_0
        CHECK(p_k_two_cut(0, c)(cc) == doctest::Approx(0.0).epsilon(1e-11));
    }

    // near-merge Taylor form: C ~ beta_2 + (beta_3 - beta_2)/2 + O((beta_3-beta_2)^2)
    double base = 0.4;
    for (double w : {1e-3, 1e-4}) {
        auto c = EndpointConfig::two_cut(-2.0, base, base + w, 2.0);
        double lead = base + 0.5 * w;
        CHECK(std::fabs(c_center(c) - lead) < 2.0 * w * w);
    }

    // near-birth form: C ~ beta_4 + 2 sqrt((bt-b1)(bt-b2)) theta / log(b4-b3)
    for (double u : {1e-6, 1e-8}) {
        double b1 = -2.0, b2 = 0.55, bt = 1.67;
        auto c = EndpointConfig::two_cut(b1, b2, bt - 0.5 * u, bt + 0.5 * u);
        double d1 = bt - b1, d2 = bt - b2;
        double theta = std::atanh(std::sqrt(d2 / d1));
        double predicted = c.beta[3] + 2.0 * std::sqrt(d1 * d2) * theta / std::log(u);
        CHECK(c_center(c) == doctest::Approx(predicted).epsilon(0.05));
    }
}

TEST_CASE("degeneration identities") {
    SUBCASE("reduce_config") {
        auto cfg = EndpointConfig::two_cut(-2.0, 0.8, 0.8, 2.0);
        auto red = reduce_config(cfg, 2);
        CHECK(red.s == 1);
        CHECK(red.beta[0] == doctest::Approx(-2.0));
        CHECK(red.beta[1] == doctest::Approx(2.0));

        auto cfg2 = EndpointConfig::two_cut(-2.0, -0.5, 1.3, 1.3);
        auto red2 = reduce_config(cfg2, 3);
        CHECK(red2.beta[0] == doctest::Approx(-2.0));
        CHECK(red2.beta[1] == doctest::Approx(-0.5));

        auto good = EndpointConfig::two_cut(-2.0, -0.5, 1.3, 1.9);
        CHECK_THROWS_AS(reduce_config(good, 2), DomainError);
    }
    SUBCASE("P_k factorization through a coalesced pair") {
        // the exterior limit is approached only like 1/log(width), so the
        // identity is exact at the tie itself; the interior limit is
        // polynomial in the width and holds already at 1e-13
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        struct Case {
            EndpointConfig cfg, red;
            double beta;
        };
        std::vector<Case> cases = {
            {EndpointConfig::two_cut(-2.0, 0.3, 0.3, 1.8), EndpointConfig::one_cut(-2.0, 1.8), 0.3},
            {EndpointConfig::two_cut(-2.0, 0.3, 0.3 + 1e-13, 1.8), EndpointConfig::one_cut(-2.0, 1.8), 0.3},
            {EndpointConfig::two_cut(-2.0, -0.6, 1.5, 1.5), EndpointConfig::one_cut(-2.0, -0.6), 1.5},
            {EndpointConfig::two_cut(-1.3, 0.2, 0.9, 0.9), EndpointConfig::one_cut(-1.3, 0.2), 0.9},
        };
        for (const auto& c : cases) {
            for (int k = 0; k <= 2; ++k) {
                Polynomial p2 = p_k_two_cut(k, c.cfg);
                Polynomial p1 = p_k_one_cut(k, c.red);
                for (int i = 0; i < 20; ++i) {
                    double z = uni(rng);
                    CHECK(p2(z) == doctest::Approx((z - c.beta) * p1(z)).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("leading behavior of P_k") {
    std::mt19937 rng(7);
    auto cfg2 = random_two_cut(rng);
    auto cfg1 = EndpointConfig::one_cut(-1.0, 2.0);
    for (int k = 0; k <= 5; ++k) {
        for (const auto& cfg : {cfg1, cfg2}) {
            Polynomial p = p_k(k, cfg);
            int expected = (k == 0) ? cfg.s - 1 : k + cfg.s - 1;
            CHECK(p.degree() == expected);
            double lead = (k == 0) ? 1.0 : 0.5 * k;
            CHECK(p.coeff(expected) == doctest::Approx(lead));
        }
    }
}
