#include <doctest.h>

#include "eseries/expansion.hpp"
#include "test_util.hpp"

using namespace eseries;
using eseries::test::R;
using eseries::test::within_ulps;

static const PrecisionContext ctx(256);

TEST_CASE("pow_expr at closed-form points") {
    CHECK(within_ulps(pow_expr(1, ctx), ctx.real(2), 4));
    // (1 + 1/(1/2))^(1/2) = sqrt(3)
    CHECK(within_ulps(pow_expr(ctx.real(R("1/2")), ctx), sqrt(ctx.real(3)), 4));
}

TEST_CASE("pow_expr approaches e from below like e/(2n)") {
    Real v = pow_expr(1000000L, ctx);
    Real e = ctx.e();
    CHECK(v < e);
    CHECK(v > e - e / 2000000L - ctx.real(R("1/1000000000")));
}

TEST_CASE("pow_expr climbs strictly toward e over 1..10000") {
    const Real e = ctx.e();
    Real prev = pow_expr(1, ctx);
    CHECK(prev < e);
    for (long n = 2; n <= 10000; ++n) {
        Real cur = pow_expr(n, ctx);
        REQUIRE(cur > prev);
        REQUIRE(cur < e);
        prev = cur;
    }
}

TEST_CASE("pow_expr rejects nonpositive arguments") {
    CHECK_THROWS_AS(pow_expr(ctx.real(0), ctx), std::domain_error);
    CHECK_THROWS_AS(pow_expr(ctx.real(-3), ctx), std::domain_error);
}

TEST_CASE("eval_truncated: depth 0 gives e, one term matches the closed form") {
    ExpansionSpec empty(R("11/12"), {});
    CHECK(eval_truncated(ctx.real(5), empty, ctx) == ctx.e());
    CHECK_THROWS_AS(eval_truncated(ctx.real(0), empty, ctx), std::domain_error);
    CHECK_THROWS_AS(eval_truncated(ctx.real(-2), empty, ctx), std::domain_error);

    // x = 10, c1 = 1/2, eps = 11/12: e (1 - (1/2)/(131/12)) = e (1 - 6/131)
    ExpansionSpec one(R("11/12"), {R("1/2")});
    CHECK(truncated_inner_exact(10, one) == R("6/131"));
    Real expected = ctx.e() * ctx.real(R("125/131"));
    CHECK(within_ulps(eval_truncated(ctx.real(10), one, ctx), expected, 2));
}

TEST_CASE("deep truncation converges to the function") {
    ExpansionSpec spec = ExpansionSpec::d_series(30);
    Real diff = abs(eval_truncated(ctx.real(5), spec, ctx) - pow_expr(5, ctx));
    CHECK(diff < ctx.parse("1e-20"));
}

TEST_CASE("truncation error decreases monotonically in depth") {
    for (long n : {1L, 2L, 5L, 10L}) {
        CAPTURE(n);
        Real x = ctx.real(n);
        Real target = pow_expr(x, ctx);
        Real prev_err = abs(eval_truncated(x, ExpansionSpec::d_series(1), ctx) - target);
        for (std::size_t depth = 2; depth <= 60; ++depth) {
            Real err = abs(eval_truncated(x, ExpansionSpec::d_series(depth), ctx) - target);
            CHECK(err <= prev_err);
            // The quadratic coefficient is the only zero one, so from depth 2
            // each extra term strictly helps.
            if (depth > 2) CHECK(err < prev_err);
            prev_err = err;
        }
    }
}

TEST_CASE("expansion spec validation") {
    CHECK_THROWS_AS(ExpansionSpec(R("0"), {}), std::domain_error);
    CHECK_THROWS_AS(ExpansionSpec(R("3/2"), {}), std::domain_error);
    CHECK(ExpansionSpec::b_series(4).depth() == 4);
    CHECK(ExpansionSpec::b_series(4).shift == 1);
    CHECK(ExpansionSpec::d_series(4).shift == R("11/12"));
}

TEST_CASE("relative error sequence: deep truncation is tiny") {
    ExpansionSpec spec = ExpansionSpec::d_series(30);
    CHECK(abs(relative_error_seq(10, spec, ctx)) < ctx.parse("1e-25"));
}

TEST_CASE("relative error sequence decays at the first omitted order") {
    const long n = 4096;
    Real nn = ctx.real(n);

    // Shift 11/12, one term kept: w_n ~ -d_3 / n^3 (the quadratic slot is 0).
    ExpansionSpec d1(R("11/12"), {R("1/2")});
    Real scaled = pow(nn, 3L) * relative_error_seq(n, d1, ctx);
    CHECK(abs(scaled + ctx.real(R("5/288"))) < ctx.parse("1e-4"));

    // Shift 1, one term kept: w_n ~ -b_2 / (n+1)^2.
    ExpansionSpec b1(R("1"), {R("1/2")});
    Real scaled_b = pow(nn + 1L, 2L) * relative_error_seq(n, b1, ctx);
    CHECK(abs(scaled_b + ctx.real(R("1/24"))) < ctx.parse("1e-4"));
}

TEST_CASE("relative error sequence rejects a nonpositive approximant") {
    ExpansionSpec bad(R("1"), {R("2")});  // 1 - 2/(1+1) = 0 at n = 1
    CHECK_THROWS_AS(relative_error_seq(1, bad, ctx), std::domain_error);
    ExpansionSpec worse(R("1"), {R("3")});
    CHECK_THROWS_AS(relative_error_seq(1, worse, ctx), std::domain_error);
    CHECK_THROWS_AS(relative_error_seq(0, bad, ctx), std::domain_error);
}

TEST_CASE("precision context: bounds and determinism") {
    CHECK_THROWS_AS(PrecisionContext(32), std::domain_error);
    CHECK_THROWS_AS(PrecisionContext(256, 0.0), std::domain_error);
    CHECK(PrecisionContext(256, 1e-9).comparison_tolerance == 1e-9);
    PrecisionContext small(64);
    CHECK(small.real(1).precision() == 64);
    // Same inputs, same bits: identical values.
    CHECK(pow_expr(17, ctx) == pow_expr(17, ctx));
    // Result precision follows the widest operand.
    CHECK((ctx.real(1) + small.real(1)).precision() == 256);
}
