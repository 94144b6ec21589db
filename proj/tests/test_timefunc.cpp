#include "gpebo/errors.hpp"
#include "gpebo/timefunc.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gpebo;

TEST_CASE("constants and single harmonics") {
    CHECK(eval_expr(parse_expr("-4"), 0.0) == -4.0);
    CHECK(eval_expr(parse_expr("-4"), 17.3) == -4.0);
    CHECK(eval_expr(parse_expr("sin(t)"), 0.0) == 0.0);
    CHECK(eval_expr(parse_expr("sin(t)"), M_PI_2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_expr(parse_expr("cos(2*t)"), 0.0) == 1.0);
    CHECK(eval_expr(parse_expr("3*cos(4.5*t - 2)"), 0.0) ==
          doctest::Approx(3.0 * std::cos(-2.0)).epsilon(1e-15));
}

TEST_CASE("sum expressions from the bundled system matrices") {
    TimeExpr a11 = parse_expr("1.8 + sin(0.5*t)");
    REQUIRE(a11.terms.size() == 2);
    CHECK(eval_expr(a11, 0.0) == doctest::Approx(1.8));
    CHECK(eval_expr(a11, M_PI) == doctest::Approx(1.8 + 1.0)); // sin(pi/2)

    TimeExpr a21 = parse_expr("5.2 + cos(2*t) + 0.5*sin(t)");
    CHECK(eval_expr(a21, 0.0) == doctest::Approx(6.2));
    CHECK(eval_expr(a21, 2.0) ==
          doctest::Approx(5.2 + std::cos(4.0) + 0.5 * std::sin(2.0)).epsilon(1e-15));

    TimeExpr l1 = parse_expr("0.8 + 0.5*sin(0.5*t)");
    CHECK(eval_expr(l1, 0.0) == doctest::Approx(0.8));
}

TEST_CASE("subtraction and phase offsets") {
    CHECK(eval_expr(parse_expr("1 - sin(t)"), M_PI_2) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(eval_expr(parse_expr("2 - 3"), 5.0) == -1.0);
    CHECK(eval_expr(parse_expr("sin(2*t + 1)"), 0.3) ==
          doctest::Approx(std::sin(1.6)).epsilon(1e-15));
    CHECK(eval_expr(parse_expr("cos(t - 0.5)"), 0.5) == doctest::Approx(1.0));
    CHECK(eval_expr(parse_expr("-2*sin(t)"), M_PI_2) == doctest::Approx(-2.0));
}

TEST_CASE("whitespace is insignificant") {
    TimeExpr e = parse_expr("  1.8+ sin( 0.5 * t )  ");
    CHECK(eval_expr(e, 0.0) == doctest::Approx(1.8));
}

TEST_CASE("canonical text round-trips to an identical evaluator") {
    const char* sources[] = {
        "1.8 + sin(0.5*t)",
        "5.2 + cos(2*t) + 0.5*sin(t)",
        "-4",
        "0.2 + cos(2*t)",
        "sin(t)",
        "1 - 0.25*cos(3*t + 0.125)",
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> time(-20.0, 20.0);
    for (const char* src : sources) {
        TimeExpr a = parse_expr(src);
        TimeExpr b = parse_expr(to_text(a));
        for (int i = 0; i < 100; ++i) {
            double t = time(rng);
            CHECK(eval_expr(a, t) == doctest::Approx(eval_expr(b, t)).epsilon(1e-15));
        }
    }
}

TEST_CASE("rejects malformed sources with a position") {
    CHECK_THROWS_AS(parse_expr(""), parse_error);
    CHECK_THROWS_AS(parse_expr("   "), parse_error);
    CHECK_THROWS_AS(parse_expr("sin(x)"), parse_error);
    CHECK_THROWS_AS(parse_expr("2**t"), parse_error);
    CHECK_THROWS_AS(parse_expr("sin(2*t"), parse_error);
    CHECK_THROWS_AS(parse_expr("tan(t)"), parse_error);
    CHECK_THROWS_AS(parse_expr("1 +"), parse_error);
    CHECK_THROWS_AS(parse_expr("sin(t) junk"), parse_error);

    try {
        parse_expr("sin(q)");
        FAIL("expected a throw");
    } catch (const parse_error& pe) {
        CHECK(pe.position() >= 4);
        CHECK(std::string(pe.what()).find("position") != std::string::npos);
    }
}
