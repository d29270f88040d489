#include <catch2/catch_amalgamated.hpp>

#include "catdimer/ratemodel.hpp"

using namespace catdimer;
using Catch::Approx;

TEST_CASE("cat manifold basis")
{
    cxd abar(0.0, std::sqrt(2.0));
    Dims dims = Dims::two(26, 26);
    CatManifold m = cat_basis(abar, dims);
    const PureState* st[4] = {&m.s1, &m.s2, &m.s3, &m.s4};
    SECTION("orthonormal")
    {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                cxd o = overlap(*st[i], *st[j]);
                REQUIRE(std::abs(o - (i == j ? 1.0 : 0.0)) < 1e-9);
            }
    }
    SECTION("joint parity sectors")
    {
        Operator pa = embed(parity(Dims::single(26)), 0, dims);
        Operator pb = embed(parity(Dims::single(26)), 1, dims);
        Operator pj{pa.m * pb.m, dims};
        REQUIRE(expectation(m.s1, pj).real() == Approx(-1.0).margin(1e-9));
        REQUIRE(expectation(m.s3, pj).real() == Approx(-1.0).margin(1e-9));
        REQUIRE(expectation(m.s2, pj).real() == Approx(1.0).margin(1e-9));
        REQUIRE(expectation(m.s4, pj).real() == Approx(1.0).margin(1e-9));
    }
    SECTION("state 2 is dark under the correlated jump")
    {
        Operator a = embed(annihilation(Dims::single(26)), 0, dims);
        Operator b = embed(annihilation(Dims::single(26)), 1, dims);
        REQUIRE(((a.m + b.m) * m.s2.a).norm() < 1e-7);
    }
    SECTION("rotation angle matches its closed form")
    {
        REQUIRE(std::sin(m.theta) ==
                Approx(m.sin_theta_asymptotic).epsilon(0.01));
    }
    SECTION("degenerate and mismatched inputs are rejected")
    {
        REQUIRE_THROWS_AS(cat_basis(cxd(0.1, 0.0), dims), DegenerateInput);
        REQUIRE_THROWS_AS(cat_basis(abar, Dims::two(26, 24)), DimensionMismatch);
    }
}

TEST_CASE("relaxation-rate formula limits")
{
    SECTION("tunneling bottleneck: gamma_delta much smaller than gamma_23")
    {
        double g = gamma_rel_formula(1e-4, 1.0);
        REQUIRE(g == Approx(1e-4).epsilon(0.01));
    }
    SECTION("parity bottleneck: gamma_23 much smaller than gamma_delta")
    {
        double g = gamma_rel_formula(1.0, 1e-4);
        REQUIRE(g == Approx(0.5e-4).epsilon(0.01));
    }
    SECTION("bounded by both channels")
    {
        for (double gd : {0.1, 1.0, 7.0})
            for (double g23 : {0.05, 0.8, 3.0}) {
                double g = gamma_rel_formula(gd, g23);
                REQUIRE(g > 0.0);
                REQUIRE(g <= gd + 1e-12);
                REQUIRE(g <= g23 + 1e-12);
            }
    }
}

TEST_CASE("asymptotic rates")
{
    cxd abar(0.0, std::sqrt(2.0));
    double Delta = 0.5, gamma = 0.7;
    RateSet r = asymptotic_rates(abar, Delta, gamma);
    SECTION("explicit values at |alpha_bar|^2 = 2")
    {
        REQUIRE(r.delta_tilde == Approx(-8.0 * std::exp(-4.0) * Delta).margin(1e-12));
        REQUIRE(r.gamma_23 == Approx(32.0 * std::exp(-8.0) * gamma).margin(1e-12));
        REQUIRE(r.gamma_43 == Approx(8.0 * gamma).margin(1e-12));
    }
    SECTION("exponential suppression with cat size")
    {
        RateSet big = asymptotic_rates(cxd(0.0, std::sqrt(3.0)), Delta, gamma);
        double expected_ratio = (3.0 / 2.0) * std::exp(-4.0);
        REQUIRE(big.gamma_23 / r.gamma_23 == Approx(expected_ratio).epsilon(1e-10));
    }
    SECTION("invalid gamma")
    {
        REQUIRE_THROWS_AS(asymptotic_rates(abar, Delta, 0.0), DegenerateInput);
    }
}

TEST_CASE("optimal damping rate")
{
    cxd abar(0.0, std::sqrt(2.0));
    double Delta = 0.5;
    double g_opt = optimal_gamma(abar, Delta);
    REQUIRE(g_opt == Approx(std::sqrt(2.0) * Delta).margin(1e-12));
    // verify it beats nearby rates in the closed formula
    double best = asymptotic_rates(abar, Delta, g_opt).gamma_rel;
    for (double f : {0.5, 0.8, 1.3, 2.0}) {
        REQUIRE(asymptotic_rates(abar, Delta, f * g_opt).gamma_rel <= best * (1.0 + 1e-9));
    }
    REQUIRE_THROWS_AS(optimal_gamma(abar, 0.0), DegenerateInput);
}

TEST_CASE("projected rates at the working point")
{
    // alpha_bar = i sqrt(2), gamma at its optimum for Delta = 0.5
    double Delta = 0.5;
    ABParams p{Delta, 2.0, 1.0, std::sqrt(2.0) * Delta, 0.0};
    Dims dims = Dims::two(26, 26);
    ProjectedRates r = projected_rates(p, dims);
    SECTION("coherent tunneling amplitude near its asymptotic value")
    {
        REQUIRE(r.numeric.delta_tilde == Approx(r.asymptotic.delta_tilde).epsilon(0.20));
    }
    SECTION("parity-switching rate near its asymptotic value")
    {
        REQUIRE(r.numeric.gamma_23 == Approx(r.asymptotic.gamma_23).epsilon(0.30));
    }
    SECTION("bright-manifold decay near its asymptotic value")
    {
        REQUIRE(r.numeric.gamma_43 == Approx(r.asymptotic.gamma_43).epsilon(0.20));
    }
    SECTION("dark states are dark")
    {
        REQUIRE(r.dark2_outflow < 1e-6 * p.gamma);
        REQUIRE(r.dark1_outflow < 1e-2 * p.gamma);
    }
    SECTION("bright-state outflow stays in the manifold")
    {
        REQUIRE(r.leakage_3 < 0.10);
        REQUIRE(r.leakage_4 < 0.10);
    }
    SECTION("dissipator respects joint parity")
    {
        REQUIRE(r.max_parity_violation < 1e-7);
    }
}

TEST_CASE("parity-switching rate is exponentially suppressed with cat size")
{
    double Delta = 0.5;
    ABParams small{Delta, 1.5, 1.0, std::sqrt(2.0) * Delta, 0.0};
    ABParams large{Delta, 2.5, 1.0, std::sqrt(2.0) * Delta, 0.0};
    ProjectedRates rs = projected_rates(small, Dims::two(24, 24));
    ProjectedRates rl = projected_rates(large, Dims::two(30, 30));
    double measured = rl.numeric.gamma_23 / rs.numeric.gamma_23;
    double expected = (2.5 / 1.5) * std::exp(-4.0 * (2.5 - 1.5));
    REQUIRE(measured > 0.0);
    REQUIRE(measured == Approx(expected).epsilon(0.5));
}
