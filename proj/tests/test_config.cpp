#include <catch2/catch_amalgamated.hpp>

#include "catdimer/config.hpp"
#include "catdimer/sweeps.hpp"

#include <cstdio>
#include <fstream>

using namespace catdimer;
using Catch::Approx;

TEST_CASE("config parsing")
{
    SECTION("values, comments and blank lines")
    {
        Config c = Config::parse_string("delta = 1.5\n"
                                        "# full-line comment\n"
                                        "lambda=2.0  # trailing comment\n"
                                        "\n"
                                        "gamma = 0.7\n");
        REQUIRE(c.get_double("delta", 0.0) == Approx(1.5));
        REQUIRE(c.get_double("lambda", 0.0) == Approx(2.0));
        REQUIRE(c.get_double("gamma", 0.0) == Approx(0.7));
        REQUIRE(c.get_double("kappa", 0.25) == Approx(0.25)); // fallback
    }
    SECTION("unknown keys are rejected with the offending line")
    {
        try {
            Config::parse_string("delta=1\nlamda=2\n", "test.cfg");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            REQUIRE(std::string(e.what()).find("test.cfg:2") != std::string::npos);
            REQUIRE(std::string(e.what()).find("lamda") != std::string::npos);
        }
    }
    SECTION("malformed lines are rejected")
    {
        REQUIRE_THROWS_AS(Config::parse_string("delta 1.0\n"), ConfigError);
        REQUIRE_THROWS_AS(Config::parse_string("delta=abc\n").get_double("delta", 0.0), ConfigError);
    }
    SECTION("integer coercion")
    {
        Config c = Config::parse_string("nmax_a=12\nnmax_b=8.5\n");
        REQUIRE(c.get_int("nmax_a", 0) == 12);
        REQUIRE_THROWS_AS(c.get_int("nmax_b", 0), ConfigError);
    }
    SECTION("missing file")
    {
        REQUIRE_THROWS_AS(Config::parse_file("/nonexistent/path.cfg"), ConfigError);
    }
    SECTION("file round trip")
    {
        Config c = to_config(ABParams{1.0, 2.0, 1.0, 0.5, 1e-3}, MismatchParams{0.01, 0.0, -0.02});
        std::string path = "config_test.cfg";
        {
            std::ofstream f(path);
            f << c.serialize();
        }
        Config back = Config::parse_file(path);
        REQUIRE(back.ab_params().lambda == Approx(2.0));
        REQUIRE(back.ab_params().kappa == Approx(1e-3));
        REQUIRE(back.mismatch_params().dU == Approx(-0.02));
        std::remove(path.c_str());
    }
}

TEST_CASE("parameter extraction")
{
    Config c = Config::parse_string("delta=0.5\nlambda=2\ngamma=0.707\nkappa=0.0002\nd_lambda=0.05\n");
    ABParams p = c.ab_params();
    REQUIRE(p.Delta == Approx(0.5));
    REQUIRE(p.lambda == Approx(2.0));
    REQUIRE(p.U == Approx(1.0)); // default
    REQUIRE(p.gamma == Approx(0.707));
    REQUIRE(p.kappa == Approx(0.0002));
    MismatchParams m = c.mismatch_params();
    REQUIRE(m.dDelta == 0.0);
    REQUIRE(m.dLambda == Approx(0.05));
}

TEST_CASE("sweep axis values")
{
    SECTION("linear")
    {
        SweepAxis ax{"delta", 0.0, 1.0, 5, SweepScale::linear};
        auto v = ax.values();
        REQUIRE(v.size() == 5);
        REQUIRE(v[0] == Approx(0.0));
        REQUIRE(v[2] == Approx(0.5));
        REQUIRE(v[4] == Approx(1.0));
    }
    SECTION("logarithmic")
    {
        SweepAxis ax{"kappa", 1e-4, 1e-2, 3, SweepScale::log};
        auto v = ax.values();
        REQUIRE(v[0] == Approx(1e-4));
        REQUIRE(v[1] == Approx(1e-3));
        REQUIRE(v[2] == Approx(1e-2));
    }
    SECTION("invalid axes and counts")
    {
        REQUIRE_THROWS_AS((SweepAxis{"delta", 0.0, 1.0, 1, SweepScale::linear}).values(), ConfigError);
        REQUIRE_THROWS_AS((SweepAxis{"nmax_a", 0.0, 1.0, 3, SweepScale::linear}).values(), ConfigError);
        REQUIRE_THROWS_AS((SweepAxis{"bogus", 0.0, 1.0, 3, SweepScale::linear}).values(), ConfigError);
        REQUIRE_THROWS_AS((SweepAxis{"kappa", 0.0, 1.0, 3, SweepScale::log}).values(), ConfigError);
    }
}

TEST_CASE("axis value application")
{
    ABParams p{1.0, 2.0, 1.0, 0.5, 0.0};
    MismatchParams m;
    REQUIRE(with_axis_value(p, m, "gamma", 3.0).gamma == Approx(3.0));
    REQUIRE(with_axis_value(p, m, "u", 2.0).U == Approx(2.0));
    with_axis_value(p, m, "d_u", 0.05);
    REQUIRE(m.dU == Approx(0.05));
    REQUIRE_THROWS_AS(with_axis_value(p, m, "nope", 1.0), ConfigError);
}

TEST_CASE("parallel map")
{
    std::vector<double> xs(37);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    SECTION("preserves order across workers")
    {
        auto out = parallel_map<double>(xs, 4, [](double x) { return 2.0 * x; });
        for (std::size_t i = 0; i < xs.size(); ++i) REQUIRE(out[i] == Approx(2.0 * xs[i]));
    }
    SECTION("propagates worker exceptions")
    {
        REQUIRE_THROWS_AS(parallel_map<double>(xs, 3,
                                               [](double x) -> double {
                                                   if (x == 20.0) throw SolverFailure("boom");
                                                   return x;
                                               }),
                          SolverFailure);
    }
}

TEST_CASE("steady sweep point fast path")
{
    SweepConfig cfg;
    cfg.params = ABParams{1.0, 2.0, 1.0, 2.0, 0.0};
    SteadySweepRow row = steady_sweep_point(cfg.params, cfg);
    REQUIRE(row.delta_over_u == Approx(1.0));
    REQUIRE(row.parity == Approx(1.0).margin(1e-10));
    REQUIRE(row.f_cat > 0.8);
    REQUIRE(row.f_numeric_vs_analytic == -1.0); // numeric not requested
    SECTION("small detuning favors the cat")
    {
        SteadySweepRow lo = steady_sweep_point(ABParams{1e-3, 2.0, 1.0, 2.0, 0.0}, cfg);
        REQUIRE(lo.f_cat > 0.999);
    }
    SECTION("large detuning favors the squeezed state")
    {
        SteadySweepRow hi = steady_sweep_point(ABParams{1000.0, 2.0, 1.0, 2.0, 0.0}, cfg);
        REQUIRE(hi.f_squeezed > 0.99);
        REQUIRE(hi.f_squeezed > hi.f_cat);
    }
}
