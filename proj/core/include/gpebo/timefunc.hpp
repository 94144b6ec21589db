#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gpebo {

// One additive term of a scalar time function: either a constant or
// amplitude * trig(omega * t + phase).
struct Term {
    enum class Kind { constant, sin, cos };
    Kind kind = Kind::constant;
    double value = 0.0;     // Kind::constant only
    double amplitude = 0.0; // harmonic kinds only
    double omega = 0.0;
    double phase = 0.0;

    static Term make_const(double v);
    static Term harmonic(Kind k, double amplitude, double omega, double phase);
};

// Immutable after parsing; safe to evaluate concurrently.
struct TimeExpr {
    std::vector<Term> terms;
};

// Grammar: expr := term (('+'|'-') term)*
//          term := number | number '*' trig | trig
//          trig := ('sin'|'cos') '(' [number ['*']] 't' [('+'|'-') number] ')'
// Whitespace is insignificant. Throws parse_error with position on bad input.
TimeExpr parse_expr(std::string_view source);

double eval_expr(const TimeExpr& e, double t);

// Canonical form; re-parses to an expression that evaluates identically.
std::string to_text(const TimeExpr& e);

} // namespace gpebo
