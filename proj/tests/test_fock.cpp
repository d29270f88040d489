#include <catch2/catch_amalgamated.hpp>

#include "catdimer/fock.hpp"

#include <random>

using namespace catdimer;
using Catch::Approx;

namespace {

PureState random_two_mode_state(const Dims& dims, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Vec v(dims.total());
    for (int i = 0; i < v.size(); ++i) v(i) = cxd(nd(rng), nd(rng));
    // keep weight away from the truncation edge so the beam-splitter check
    // does not trip the leakage diagnostic
    int nl = dims.n_max(0), nr = dims.n_max(1);
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nr; ++j)
            if (i + j > std::min(nl, nr) - 3) v(i * nr + j) = 0.0;
    return PureState{v, dims}.normalized();
}

} // namespace

TEST_CASE("annihilation matrix entries")
{
    Operator a = annihilation(Dims::single(3));
    Mat expect(3, 3);
    expect << 0, 1, 0, 0, 0, std::sqrt(2.0), 0, 0, 0;
    REQUIRE((a.m - expect).norm() == Approx(0.0).margin(1e-15));
}

TEST_CASE("ladder commutator is identity below the truncation edge")
{
    Dims d = Dims::single(12);
    Operator a = annihilation(d);
    Mat comm = a.m * a.m.adjoint() - a.m.adjoint() * a.m;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j)
            REQUIRE(std::abs(comm(i, j) - (i == j ? 1.0 : 0.0)) < 1e-14);
}

TEST_CASE("number operator eigenvalue on |5>")
{
    Dims d = Dims::single(8);
    Operator n = number_op(d);
    PureState f5 = fock_state(5, d);
    Vec applied = n.m * f5.a;
    REQUIRE((applied - 5.0 * f5.a).norm() == Approx(0.0).margin(1e-14));
}

TEST_CASE("parity expectation on cats and vacuum")
{
    Dims d = Dims::single(40);
    Operator p = parity(d);
    cxd alpha(0.0, 2.0);
    REQUIRE(expectation(cat(alpha, CatSign::even, d), p).real() == Approx(1.0).margin(1e-12));
    REQUIRE(expectation(cat(alpha, CatSign::odd, d), p).real() == Approx(-1.0).margin(1e-12));
    REQUIRE(expectation(fock_state(0, d), p).real() == Approx(1.0));
}

TEST_CASE("displacement basics")
{
    Dims d = Dims::single(30);
    SECTION("alpha = 0 gives identity")
    {
        Operator id = displacement(0.0, d);
        REQUIRE((id.m - Mat::Identity(30, 30)).norm() == Approx(0.0).margin(1e-13));
    }
    SECTION("D(alpha)|0> is the coherent state")
    {
        cxd alpha(1.0, 0.0);
        Vec disp = displacement(alpha, d).m * fock_state(0, d).a;
        Vec coh = coherent(alpha, d).a;
        REQUIRE((disp - coh).norm() < 1e-10);
    }
    SECTION("D(alpha) D(-alpha) = 1 within truncation")
    {
        Dims d40 = Dims::single(40);
        cxd alpha(1.5, 0.0);
        Mat prod = displacement(alpha, d40).m * displacement(-alpha, d40).m;
        REQUIRE((prod - Mat::Identity(40, 40)).norm() < 1e-8);
    }
}

TEST_CASE("coherent state properties")
{
    Dims d = Dims::single(30);
    SECTION("alpha = 0 is vacuum")
    {
        REQUIRE((coherent(0.0, d).a - fock_state(0, d).a).norm() == Approx(0.0));
    }
    SECTION("mean photon number is |alpha|^2")
    {
        cxd alpha = cxd(0.0, 1.0) * std::sqrt(2.0);
        REQUIRE(expectation(coherent(alpha, d), number_op(d)).real() == Approx(2.0).margin(1e-8));
    }
    SECTION("overlap <alpha|-alpha> matches the analytic formula")
    {
        // oracle: |<a|b>| = exp(-|a-b|^2/2), here exp(-2|alpha|^2)
        cxd alpha(1.0, 0.0);
        double got = std::abs(overlap(coherent(alpha, d), coherent(-alpha, d)));
        REQUIRE(got == Approx(std::exp(-2.0)).margin(1e-8));
    }
    SECTION("inadequate truncation raises")
    {
        REQUIRE_THROWS_AS(coherent(3.0, Dims::single(10)), TruncationError);
        REQUIRE_NOTHROW(coherent(3.0, Dims::single(10), 1e-10, true));
    }
}

TEST_CASE("cat state properties")
{
    Dims d = Dims::single(30);
    SECTION("even cat at alpha = 0 is vacuum")
    {
        PureState c = cat(0.0, CatSign::even, d);
        REQUIRE((c.a - fock_state(0, d).a).norm() == Approx(0.0).margin(1e-14));
    }
    SECTION("odd cat at alpha = 0 is degenerate")
    {
        REQUIRE_THROWS_AS(cat(0.0, CatSign::odd, d), DegenerateInput);
    }
    SECTION("opposite-parity cats are orthogonal")
    {
        cxd alpha(0.0, 2.0);
        Dims d40 = Dims::single(40);
        REQUIRE(std::abs(overlap(cat(alpha, CatSign::even, d40), cat(alpha, CatSign::odd, d40))) < 1e-14);
    }
    SECTION("even cat mean photon number matches the Fock-sum oracle")
    {
        // oracle evaluated independently: <n> = |a|^2 tanh(|a|^2) for C+
        cxd alpha = std::sqrt(2.0);
        double expect = 2.0 * std::tanh(2.0);
        REQUIRE(expectation(cat(alpha, CatSign::even, d), number_op(d)).real() ==
                Approx(expect).margin(1e-6));
    }
    SECTION("parity sectors are exactly empty")
    {
        cxd alpha(1.3, 0.4);
        PureState even = cat(alpha, CatSign::even, d);
        PureState odd = cat(alpha, CatSign::odd, d);
        for (int n = 0; n < 30; ++n) {
            if (n % 2 == 1) REQUIRE(std::abs(even.a(n)) == 0.0);
            if (n % 2 == 0) REQUIRE(std::abs(odd.a(n)) == 0.0);
        }
    }
}

TEST_CASE("embedding")
{
    Dims dims = Dims::two(4, 5);
    Dims da = Dims::single(4), db = Dims::single(5);
    SECTION("identity embeds to identity")
    {
        Operator e = embed(identity(da), 0, dims);
        REQUIRE((e.m - Mat::Identity(20, 20)).norm() == Approx(0.0));
    }
    SECTION("operators on distinct factors commute exactly")
    {
        Operator a = embed(annihilation(da), 0, dims);
        Operator b = embed(annihilation(db), 1, dims);
        REQUIRE((a.m * b.m - b.m * a.m).norm() == 0.0);
    }
    SECTION("number operator acts on the left slot of |2,3>")
    {
        PureState s = tensor(fock_state(2, da), fock_state(3, db));
        Vec applied = embed(number_op(da), 0, dims).m * s.a;
        REQUIRE((applied - 2.0 * s.a).norm() == Approx(0.0).margin(1e-14));
    }
    SECTION("slot size mismatch throws")
    {
        REQUIRE_THROWS_AS(embed(annihilation(da), 1, dims), DimensionMismatch);
    }
}

TEST_CASE("beam splitter")
{
    SECTION("vacuum is invariant")
    {
        Dims dims = Dims::two(8, 8);
        PureState vac = tensor(fock_state(0, Dims::single(8)), fock_state(0, Dims::single(8)));
        PureState out = beamsplitter_map(vac, BsDirection::ab_to_cd);
        REQUIRE(std::abs(std::abs(overlap(vac, out)) - 1.0) < 1e-12);
    }
    SECTION("round trip is the identity on a random state")
    {
        Dims dims = Dims::two(14, 14);
        PureState psi = random_two_mode_state(dims, 42);
        PureState rt = beamsplitter_map(beamsplitter_map(psi, BsDirection::ab_to_cd), BsDirection::cd_to_ab);
        REQUIRE((rt.a - psi.a).norm() < 1e-10);
    }
    SECTION("coherent input splits as expected")
    {
        // |0>_c |beta>_d -> |beta/sqrt2>_a |-beta/sqrt2>_b
        Dims dims = Dims::two(20, 20);
        cxd beta(1.1, 0.7);
        PureState in = tensor(fock_state(0, Dims::single(20)), coherent(beta, Dims::single(20)));
        PureState out = beamsplitter_map(in, BsDirection::cd_to_ab);
        PureState expect = tensor(coherent(beta / std::sqrt(2.0), Dims::single(20)),
                                  coherent(-beta / std::sqrt(2.0), Dims::single(20)));
        REQUIRE(std::abs(overlap(expect, out)) == Approx(1.0).margin(1e-10));
    }
    SECTION("photon number and purity preserved")
    {
        Dims dims = Dims::two(12, 12);
        PureState psi = random_two_mode_state(dims, 7);
        Operator ntot = Operator{embed(number_op(Dims::single(12)), 0, dims).m +
                                     embed(number_op(Dims::single(12)), 1, dims).m,
                                 dims};
        PureState out = beamsplitter_map(psi, BsDirection::ab_to_cd);
        REQUIRE(expectation(out, ntot).real() == Approx(expectation(psi, ntot).real()).margin(1e-10));
        REQUIRE(out.norm() == Approx(1.0).margin(1e-12));
    }
    SECTION("unequal mode sizes are rejected")
    {
        Dims dims = Dims::two(8, 10);
        PureState psi = tensor(fock_state(0, Dims::single(8)), fock_state(0, Dims::single(10)));
        REQUIRE_THROWS_AS(beamsplitter_map(psi, BsDirection::ab_to_cd), DimensionMismatch);
    }
}
