#include "gpebo/timefunc.hpp"

#include "gpebo/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace gpebo {

Term Term::make_const(double v) {
    Term t;
    t.kind = Kind::constant;
    t.value = v;
    return t;
}

Term Term::harmonic(Kind k, double amplitude, double omega, double phase) {
    Term t;
    t.kind = k;
    t.amplitude = amplitude;
    t.omega = omega;
    t.phase = phase;
    return t;
}

namespace {

struct Cursor {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' ||
                                    src[pos] == '\n' || src[pos] == '\r'))
            ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c))
            throw parse_error(std::string("expected ") + what, pos);
    }
    bool accept_word(std::string_view w) {
        skip_ws();
        if (src.substr(pos, w.size()) == w) {
            pos += w.size();
            return true;
        }
        return false;
    }

    bool at_number() {
        char c = peek();
        if (c == '+' || c == '-') {
            std::size_t q = pos + 1;
            while (q < src.size() && (src[q] == ' ' || src[q] == '\t')) ++q;
            return q < src.size() && (std::isdigit((unsigned char)src[q]) || src[q] == '.');
        }
        return std::isdigit((unsigned char)c) || c == '.';
    }

    double number() {
        skip_ws();
        std::size_t start = pos;
        double sign = 1.0;
        if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) {
            if (src[pos] == '-') sign = -1.0;
            ++pos;
            skip_ws();
        }
        std::size_t d0 = pos;
        while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
        }
        if (pos == d0) throw parse_error("expected number", start);
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t mark = pos++;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            std::size_t e0 = pos;
            while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
            if (pos == e0) pos = mark; // "e" belonged to something else; unlikely, be lenient
        }
        double v = 0.0;
        auto r = std::from_chars(src.data() + d0, src.data() + pos, v);
        if (r.ec != std::errc())
            throw parse_error("malformed number", start);
        return sign * v;
    }
};

// trig := ('sin'|'cos') '(' [number ['*']] 't' [('+'|'-') number] ')'
Term parse_trig(Cursor& c, Term::Kind kind, double amplitude) {
    c.expect('(', "'(' after sin/cos");
    double omega = 1.0;
    if (c.at_number()) {
        omega = c.number();
        c.accept('*');
    }
    std::size_t tpos = c.pos;
    if (!c.accept('t'))
        throw parse_error("expected 't' inside sin/cos argument", tpos);
    double phase = 0.0;
    char sgn = c.peek();
    if (sgn == '+' || sgn == '-') {
        ++c.pos;
        double p = c.number();
        phase = (sgn == '-') ? -p : p;
    }
    c.expect(')', "')' closing sin/cos argument");
    return Term::harmonic(kind, amplitude, omega, phase);
}

// term := number | number '*' trig | trig
Term parse_term(Cursor& c) {
    if (c.accept_word("sin")) return parse_trig(c, Term::Kind::sin, 1.0);
    if (c.accept_word("cos")) return parse_trig(c, Term::Kind::cos, 1.0);
    if (!c.at_number())
        throw parse_error("expected number, 'sin' or 'cos'", c.pos);
    double v = c.number();
    if (c.accept('*')) {
        if (c.accept_word("sin")) return parse_trig(c, Term::Kind::sin, v);
        if (c.accept_word("cos")) return parse_trig(c, Term::Kind::cos, v);
        throw parse_error("expected 'sin' or 'cos' after '*'", c.pos);
    }
    return Term::make_const(v);
}

void write_number(std::string& out, double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

} // namespace

TimeExpr parse_expr(std::string_view source) {
    Cursor c{source};
    if (c.eof()) throw parse_error("empty expression", 0);
    TimeExpr e;
    e.terms.push_back(parse_term(c));
    while (!c.eof()) {
        char op = c.peek();
        if (op != '+' && op != '-')
            throw parse_error("expected '+' or '-' between terms", c.pos);
        ++c.pos;
        Term t = parse_term(c);
        if (op == '-') {
            if (t.kind == Term::Kind::constant)
                t.value = -t.value;
            else
                t.amplitude = -t.amplitude;
        }
        e.terms.push_back(t);
    }
    return e;
}

double eval_expr(const TimeExpr& e, double t) {
    double s = 0.0;
    for (const Term& term : e.terms) {
        switch (term.kind) {
        case Term::Kind::constant: s += term.value; break;
        case Term::Kind::sin: s += term.amplitude * std::sin(term.omega * t + term.phase); break;
        case Term::Kind::cos: s += term.amplitude * std::cos(term.omega * t + term.phase); break;
        }
    }
    return s;
}

std::string to_text(const TimeExpr& e) {
    if (e.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const Term& term : e.terms) {
        double lead = (term.kind == Term::Kind::constant) ? term.value : term.amplitude;
        if (first) {
            first = false;
        } else {
            out += (lead < 0.0) ? " - " : " + ";
            if (lead < 0.0) lead = -lead;
        }
        if (term.kind == Term::Kind::constant) {
            write_number(out, lead);
            continue;
        }
        write_number(out, lead);
        out += (term.kind == Term::Kind::sin) ? "*sin(" : "*cos(";
        write_number(out, term.omega);
        out += "*t";
        if (term.phase != 0.0) {
            out += (term.phase < 0.0) ? " - " : " + ";
            write_number(out, std::fabs(term.phase));
        }
        out += ')';
    }
    return out;
}

} // namespace gpebo
