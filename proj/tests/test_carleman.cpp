#include <doctest.h>

#include "eseries/carleman.hpp"
#include "eseries/expansion.hpp"
#include "test_util.hpp"

using namespace eseries;
using eseries::test::R;
using eseries::test::within_ulps;

static const PrecisionContext ctx(256);

TEST_CASE("weight values at n = 1") {
    CHECK(weight_exact(WeightFamily::classical(), 7) == Rational(1));
    CHECK(weight_exact(WeightFamily::bicheng(), 1) == R("3/4"));
    CHECK(weight_exact(WeightFamily::d_weights(1), 1) == R("17/23"));
    // ping: (1 + 1/(1+1/5))^{-1/2} = sqrt(6/11)
    CHECK(within_ulps(weight(WeightFamily::ping(), 1, ctx), sqrt(ctx.real(R("6/11"))), 2));
    CHECK_FALSE(weight_exact(WeightFamily::ping(), 1).has_value());
}

TEST_CASE("yang with c = 1 collapses to the one-term shifted series weight") {
    for (long n : {1L, 2L, 17L, 500L}) {
        CAPTURE(n);
        Real y = weight(WeightFamily::yang(Rational(1)), n, ctx);
        Real d1 = weight(WeightFamily::d_weights(1), n, ctx);
        CHECK(abs(y - d1) <= ulp(d1) * 2L);
    }
}

TEST_CASE("family validation and parsing") {
    CHECK_THROWS_AS(WeightFamily::yang(Rational(0)), std::domain_error);
    CHECK_THROWS_AS(WeightFamily::yang(Rational(-1)), std::domain_error);
    CHECK_THROWS_AS(WeightFamily::b_weights(0), std::domain_error);
    // A small positive c makes the base negative at small n.
    CHECK_THROWS_AS(weight(WeightFamily::yang(R("1/100")), 1, ctx), std::domain_error);
    CHECK_THROWS_AS(weight(WeightFamily::classical(), 0, ctx), std::domain_error);

    CHECK(WeightFamily::parse("d-series:3").name() == "d-series:3");
    CHECK(WeightFamily::parse("yang:2/3").name() == "yang:2/3");
    CHECK(WeightFamily::parse("classical").name() == "classical");
    CHECK_THROWS_AS(WeightFamily::parse("nope"), std::invalid_argument);
    CHECK_THROWS_AS(WeightFamily::parse("d-series"), std::invalid_argument);
}

TEST_CASE("series weights: exact-then-round equals floating accumulation to 2 ulp") {
    for (std::size_t depth : {std::size_t{1}, std::size_t{3}, std::size_t{6}}) {
        for (long n : {1L, 2L, 17L, 1000L}) {
            CAPTURE(depth);
            CAPTURE(n);
            Real wb = weight(WeightFamily::b_weights(depth), n, ctx);
            CHECK(abs(wb - weight_accumulated(WeightFamily::b_weights(depth), n, ctx)) <=
                  ulp(wb) * 2L);
            Real wd = weight(WeightFamily::d_weights(depth), n, ctx);
            CHECK(abs(wd - weight_accumulated(WeightFamily::d_weights(depth), n, ctx)) <=
                  ulp(wd) * 2L);
        }
    }
}

TEST_CASE("deeper shifted series weights tighten monotonically") {
    for (long n : {1L, 7L, 100L}) {
        CAPTURE(n);
        Rational prev = *weight_exact(WeightFamily::d_weights(1), n);
        for (std::size_t depth = 2; depth <= 12; ++depth) {
            Rational cur = *weight_exact(WeightFamily::d_weights(depth), n);
            if (depth == 2) {
                CHECK(cur == prev);  // the quadratic coefficient is zero
            } else {
                CHECK(cur < prev);
            }
            prev = cur;
        }
    }
}

TEST_CASE("pointwise margins") {
    // At N = 1 the bicheng margin is e 3/4 - 2.
    Real m = pointwise_margin(WeightFamily::bicheng(), 1, ctx);
    CHECK(abs(m - ctx.parse("0.0387113713442839265202")) < ctx.parse("1e-18"));

    // e - (1+1/n)^n decreases, so the classical scan bottoms out at n = N.
    auto scan = margin_scan({WeightFamily::classical()}, 1000, ctx)[0];
    CHECK(scan.argmin == 1000);
    CHECK(scan.min_margin == ctx.e() - pow_expr(1000, ctx));
    CHECK(scan.min_margin.sign() > 0);

    for (std::size_t depth : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{6}}) {
        CAPTURE(depth);
        CHECK(pointwise_margin(WeightFamily::d_weights(depth), 2000, ctx).sign() > 0);
    }
    CHECK_THROWS_AS(pointwise_margin(WeightFamily::classical(), 0, ctx), std::domain_error);
}

TEST_CASE("margin scans are identical for any worker count") {
    std::vector<WeightFamily> fams{WeightFamily::d_weights(3), WeightFamily::bicheng()};
    auto one = margin_scan(fams, 5000, ctx, 1);
    auto four = margin_scan(fams, 5000, ctx, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].min_margin == four[i].min_margin);
        CHECK(one[i].argmin == four[i].argmin);
    }
}

TEST_CASE("weight failures propagate out of threaded scans") {
    // yang with c = 3/20 has a zero base at n = 1.
    std::vector<WeightFamily> fams{WeightFamily::yang(R("3/20"))};
    CHECK_THROWS_AS(margin_scan(fams, 5000, ctx, 1), std::domain_error);
    CHECK_THROWS_AS(margin_scan(fams, 5000, ctx, 4), std::domain_error);
}

TEST_CASE("sequence specs validate their invariants") {
    CHECK_THROWS_AS(SequenceSpec::geometric(Rational(1)), std::domain_error);
    CHECK_THROWS_AS(SequenceSpec::geometric(Rational(0)), std::domain_error);
    CHECK_THROWS_AS(SequenceSpec::power_decay(Rational(1)), std::domain_error);
    CHECK_THROWS_AS(SequenceSpec::finite_support({}), std::domain_error);
    CHECK_THROWS_AS(SequenceSpec::finite_support({R("0"), R("0")}), std::domain_error);
    CHECK_THROWS_AS(SequenceSpec::finite_support({R("-1")}), std::domain_error);
    CHECK(SequenceSpec::parse("geometric:1/2").name() == "geometric:1/2");
    CHECK(SequenceSpec::parse("power:2").name() == "power:2");
    CHECK(SequenceSpec::parse("finite:1,0,3").name() == "finite:1,0,3");
    CHECK_THROWS_AS(SequenceSpec::parse("fib:1"), std::invalid_argument);
}

TEST_CASE("finite report: geometric ratio 1/2 against the classical weight") {
    auto rep = finite_carleman_report(SequenceSpec::geometric(R("1/2")),
                                      WeightFamily::classical(), 10000, ctx);
    // Closed forms: LHS -> 1/(2 - sqrt 2), RHS -> e.
    Real lhs_closed = 1L / (2L - sqrt(ctx.real(2)));
    CHECK(abs(rep.lhs - lhs_closed) < ctx.parse("1e-8"));
    CHECK(abs(rep.rhs - ctx.e()) < ctx.parse("1e-8"));
    CHECK(rep.holds);
    CHECK(rep.min_margin.sign() > 0);
}

TEST_CASE("finite report: single-spike sequence") {
    auto rep = finite_carleman_report(SequenceSpec::finite_support({R("1")}),
                                      WeightFamily::classical(), 100, ctx);
    CHECK(rep.lhs == ctx.real(1));
    CHECK(rep.rhs == ctx.e());
    CHECK(rep.holds);
}

TEST_CASE("finite report: an interior zero kills later geometric means only") {
    auto rep = finite_carleman_report(SequenceSpec::finite_support({R("1"), R("0"), R("3")}),
                                      WeightFamily::classical(), 100, ctx);
    CHECK(rep.lhs == ctx.real(1));           // means from n = 2 on are all 0
    CHECK(rep.rhs == ctx.e() * ctx.real(4)); // but the right side keeps a_3 = 3
    CHECK(rep.holds);
}

TEST_CASE("finite report: power decay against the deep shifted weight") {
    auto tight = finite_carleman_report(SequenceSpec::power_decay(R("2")),
                                        WeightFamily::d_weights(4), 10000, ctx);
    auto loose = finite_carleman_report(SequenceSpec::power_decay(R("2")),
                                        WeightFamily::classical(), 10000, ctx);
    CHECK(tight.holds);
    CHECK(loose.holds);
    CHECK(tight.rhs < loose.rhs);
}

TEST_CASE("tightness ranking") {
    auto two = tightness_ranking({WeightFamily::classical(), WeightFamily::bicheng()}, 100, ctx);
    REQUIRE(two.size() == 2);
    CHECK(two[0].family.kind == WeightFamily::Kind::bicheng_debnath);
    CHECK(two[0].total_slack < two[1].total_slack);

    auto pair = tightness_ranking({WeightFamily::bicheng(), WeightFamily::d_weights(3)}, 1000, ctx);
    CHECK(pair[0].family.kind == WeightFamily::Kind::d_series);
    // Tighter at every single index, not just in total.
    for (long n = 1; n <= 1000; ++n) {
        REQUIRE(*weight_exact(WeightFamily::d_weights(3), n) <
                *weight_exact(WeightFamily::bicheng(), n));
    }

    auto single = tightness_ranking({WeightFamily::ping()}, 50, ctx);
    REQUIRE(single.size() == 1);
    CHECK(single[0].family.kind == WeightFamily::Kind::ping_guozheng);
    CHECK_THROWS_AS(tightness_ranking({}, 10, ctx), std::domain_error);
}
