#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "rlbesov/weights.hpp"
#include "testutil.hpp"

using namespace rlbesov;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("power weight: exact masses and values") {
    Weight w = weight_parse("power t=3 delta=0");
    CHECK(w.kind == WeightKind::Power);
    CHECK_THAT(w.p, WithinAbs(-3.0, 0.0));
    CHECK_THAT(w.value(0.0), WithinAbs(1.0, 0.0));
    CHECK_THAT(w.value(1.0), WithinAbs(0.125, 1e-15));
    CHECK_THAT(w.mass(0.0, 1.0), WithinAbs(3.0 / 8.0, 1e-15));
    CHECK_THAT(w.mass(-1.0, 1.0), WithinAbs(3.0 / 4.0, 1e-15));
    // quadrature oracle on an asymmetric interval (kink at the center)
    double oracle = testutil::simpson_split([&](double x) { return w.value(x); }, -2.0, 5.0, {0.0});
    CHECK_THAT(w.mass(-2.0, 5.0), WithinAbs(oracle, 1e-6));

    Weight wlog = weight_parse("power t=1 delta=0");
    CHECK_THAT(wlog.mass(0.0, 1.0), WithinAbs(std::log(2.0), 1e-15));

    Weight ws = weight_parse("power t=2 delta=0.5 shift=3/2");
    CHECK_THAT(ws.p, WithinAbs(-1.5, 0.0));
    CHECK_THAT(ws.value(1.5), WithinAbs(1.0, 0.0));
    double o2 = testutil::simpson_split([&](double x) { return ws.value(x); }, -1.0, 4.0, {1.5});
    CHECK_THAT(ws.mass(-1.0, 4.0), WithinAbs(o2, 1e-6));
}

TEST_CASE("power weight: essinf and translation") {
    Weight w = weight_parse("power t=3 delta=0");
    CHECK_THAT(w.essinf(1.0, 3.0), WithinAbs(std::pow(4.0, -3.0), 1e-15));
    CHECK_THAT(w.essinf(-1.0, 2.0), WithinAbs(std::pow(3.0, -3.0), 1e-15));
    Weight wp = w.pow(-2.0);  // (1+|x|)^6: increasing away from 0
    CHECK_THAT(wp.essinf(1.0, 3.0), WithinAbs(std::pow(2.0, 6.0), 1e-12));
    CHECK_THAT(wp.essinf(-1.0, 2.0), WithinAbs(1.0, 0.0));

    Weight wt = w.translate(Dyadic(5, 1));  // x -> w(x + 5/2)
    auto g = testutil::rng(101);
    for (int i = 0; i < 30; ++i) {
        double a = testutil::uniform(g, -6.0, 6.0);
        double b = a + testutil::uniform(g, 0.0, 3.0);
        CHECK_THAT(wt.mass(a, b), WithinRel(w.mass(a + 2.5, b + 2.5), 1e-13));
        CHECK_THAT(wt.value(a), WithinRel(w.value(a + 2.5), 1e-13));
    }
}

TEST_CASE("homogeneous weight: exact masses, divergence, origin pin") {
    Weight w = weight_parse("homog zeta=2");
    CHECK_THAT(w.mass(0.0, 2.0), WithinAbs(8.0 / 3.0, 1e-14));
    CHECK_THAT(w.mass(-1.0, 2.0), WithinAbs(3.0, 1e-14));
    Weight wh = weight_parse("homog zeta=0.5");
    CHECK_THAT(wh.mass(-1.0, 2.0), WithinAbs((2.0 * std::sqrt(2.0) * 2.0 / 3.0) + 2.0 / 3.0, 1e-13));
    // conjugate powers can push the exponent past -1: masses touching 0 diverge
    Weight div = wh.pow(-4.0);  // |x|^-2
    CHECK(std::isinf(div.mass(-1.0, 1.0)));
    CHECK(std::isfinite(div.mass(1.0, 2.0)));
    CHECK_THAT(div.mass(1.0, 2.0), WithinAbs(0.5, 1e-14));
    CHECK_THROWS_AS(weight_parse("homog zeta=-1"), std::invalid_argument);
    CHECK_THROWS_AS(w.translate(Dyadic(1)), std::invalid_argument);
    CHECK_THAT(w.essinf(-1.0, 2.0), WithinAbs(0.0, 0.0));
    CHECK_THAT(w.essinf(1.0, 2.0), WithinAbs(1.0, 1e-15));
}

TEST_CASE("constant and table weights") {
    Weight one = weight_parse("constant 1");
    CHECK_THAT(one.mass(-3.0, 7.0), WithinAbs(10.0, 0.0));
    CHECK_THAT(one.essinf(0.0, 1.0), WithinAbs(1.0, 0.0));
    CHECK_THROWS_AS(weight_parse("constant -2"), std::invalid_argument);
    CHECK_THROWS_AS(weight_parse("mystery 1"), std::invalid_argument);

    std::string path = "weight_table_test.txt";
    {
        std::ofstream f(path);
        f << "0 1\n1 2\n2 4\n";
    }
    Weight tab = weight_parse("table file=" + path);
    CHECK_THAT(tab.value(-5.0), WithinAbs(1.0, 0.0));   // left edge extension
    CHECK_THAT(tab.value(0.5), WithinAbs(1.0, 0.0));
    CHECK_THAT(tab.value(1.0), WithinAbs(2.0, 0.0));
    CHECK_THAT(tab.value(9.0), WithinAbs(4.0, 0.0));    // right edge extension
    CHECK_THAT(tab.mass(0.0, 2.0), WithinAbs(3.0, 1e-15));
    CHECK_THAT(tab.mass(-1.0, 3.0), WithinAbs(1.0 + 3.0 + 4.0, 1e-15));
    CHECK_THAT(tab.mass(0.5, 1.5), WithinAbs(0.5 + 1.0, 1e-15));
    CHECK_THAT(tab.essinf(0.5, 5.0), WithinAbs(1.0, 0.0));
    CHECK_THAT(tab.essinf(1.2, 1.8), WithinAbs(2.0, 0.0));
    Weight tab2 = tab.pow(2.0);
    CHECK_THAT(tab2.mass(0.0, 2.0), WithinAbs(1.0 + 4.0, 1e-15));
    Weight tabt = tab.translate(Dyadic(1));
    CHECK_THAT(tabt.value(0.0), WithinAbs(tab.value(1.0), 0.0));
    std::remove(path.c_str());
}

TEST_CASE("Muckenhoupt scan: exact values for model weights") {
    Weight one = weight_parse("constant 1");
    CHECK_THAT(muckenhoupt_constant(one, 1.0).value, WithinAbs(1.0, 0.0));
    CHECK_THAT(muckenhoupt_constant(one, 2.0).value, WithinAbs(1.0, 1e-14));

    // |x|^(1/2) at rho = 2: every interval [0, L] gives exactly 4/3, and that
    // is the sup over the scanned family
    Weight wh = weight_parse("homog zeta=0.5");
    MuckenhouptResult m = muckenhoupt_constant(wh, 2.0);
    CHECK_THAT(m.value, WithinRel(4.0 / 3.0, 1e-10));
    CHECK((m.arg_tau == 0 || m.arg_tau == -1));

    // rho = 1 on a weight vanishing at the origin is unstable (infinite sup)
    CHECK(std::isinf(muckenhoupt_constant(wh, 1.0).value));

    CHECK_THROWS_AS(muckenhoupt_constant(one, 0.5), std::invalid_argument);
}

TEST_CASE("critical index bracket") {
    Weight pw = weight_parse("power t=3 delta=0");
    IndexBracket b1 = weight_index_bracket(pw);
    CHECK(b1.lo == 1.0);
    CHECK(b1.hi == 1.0);
    CHECK_FALSE(b1.hi_is_infinite);
    CHECK_THAT(sigma_p_of_weight(pw, 2.0), WithinAbs(0.0, 1e-12));

    Weight one = weight_parse("constant 1");
    IndexBracket b2 = weight_index_bracket(one);
    CHECK(b2.lo == 1.0);
    CHECK(b2.hi == 1.0);

    // |x|^2 transitions at rho = 3 (conjugate mass diverges up to there)
    Weight wh = weight_parse("homog zeta=2");
    IndexBracket b3 = weight_index_bracket(wh);
    CHECK(b3.lo >= 2.9);
    CHECK(b3.lo <= 3.0);
    CHECK(b3.hi >= 3.0);
    CHECK(b3.hi <= 3.05);
    CHECK_FALSE(b3.hi_is_infinite);
}

TEST_CASE("doubling witnesses") {
    Weight one = weight_parse("constant 1");
    DoublingWitness d1 = doubling_check(one, 1.0, 1.0);
    CHECK_THAT(d1.c1, WithinAbs(1.0, 0.0));  // exact for the constant weight
    CHECK_THAT(d1.c2, WithinAbs(1.0, 0.0));
    // with rho* = 2 the reverse witness grows to the depth of the scan family
    DoublingWitness d2 = doubling_check(one, 1.0, 2.0, 6);
    CHECK_THAT(d2.c2, WithinAbs(64.0, 1e-10));

    Weight pw = weight_parse("power t=3 delta=0");
    DoublingWitness d3 = doubling_check(pw, 1.0, 1.0);
    CHECK(d3.c1 >= 1.0);
    CHECK(std::isfinite(d3.c1));
}
