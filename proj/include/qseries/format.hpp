// Textual form of polynomials and series: terms sorted by exponent,
// "c*q^e" with e an integer or n/2, e.g.  1 - q - q^2 + 2*q^(7/2).
// Exact polynomials and truncated series render identically; the parser
// reads the same format back for test fixtures.
#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include "qseries/polynomial.hpp"
#include "qseries/series.hpp"

namespace qseries {

namespace detail {

inline void render_term(std::ostringstream& out, bool first, const HalfExp& e, const Int& c) {
    Int a = c;
    if (first) {
        if (a < 0) {
            out << "-";
            a = -a;
        }
    } else {
        out << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
    }
    const bool unit_coeff = (a == 1);
    if (e.halves == 0) {
        out << a.get_str();
        return;
    }
    if (!unit_coeff) out << a.get_str() << "*";
    if (e == HalfExp::integer(1)) {
        out << "q";
    } else if (e.is_integral() && e.halves > 0) {
        out << "q^" << e.whole();
    } else {
        out << "q^(" << e.str() << ")";
    }
}

template <class TermMap>
inline std::string render_terms(const TermMap& terms) {
    if (terms.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms) {
        render_term(out, first, e, c);
        first = false;
    }
    return out.str();
}

}  // namespace detail

inline std::string to_string(const QPolynomial& p) { return detail::render_terms(p.terms()); }
inline std::string to_string(const QSeries& s) { return detail::render_terms(s.terms()); }

// Parses the rendered format. Grammar, whitespace-insensitive:
//   expr := ['-'] term (('+'|'-') term)*
//   term := int ['*' qpow] | qpow
//   qpow := 'q' ['^' (int | '(' int '/' '2' ')' | int '/' '2')]
inline QPolynomial parse_polynomial(const std::string& text) {
    QPolynomial result;
    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    const auto parse_int = [&]() -> Int {
        skip_ws();
        std::size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
            throw error("parse: expected integer at position " + std::to_string(start));
        return Int(text.substr(start, i - start));
    };
    const auto parse_exponent = [&]() -> HalfExp {
        skip_ws();
        bool paren = false;
        if (i < text.size() && text[i] == '(') {
            paren = true;
            ++i;
        }
        Int num = parse_int();
        std::int64_t n = num.get_si();
        HalfExp e = HalfExp::integer(n);
        skip_ws();
        if (i < text.size() && text[i] == '/') {
            ++i;
            Int den = parse_int();
            if (den != 2) throw error("parse: only /2 exponents are supported");
            e = HalfExp::half_steps(n);
        }
        if (paren) {
            skip_ws();
            if (i >= text.size() || text[i] != ')') throw error("parse: expected ')'");
            ++i;
        }
        return e;
    };

    skip_ws();
    if (i >= text.size()) throw error("parse: empty input");
    if (text.compare(i, 1, "0") == 0 && i + 1 >= text.size()) return result;

    int sign = 1;
    if (text[i] == '-') {
        sign = -1;
        ++i;
    } else if (text[i] == '+') {
        ++i;
    }
    while (true) {
        skip_ws();
        Int coeff = 1;
        HalfExp exp{0};
        bool have_coeff = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            coeff = parse_int();
            have_coeff = true;
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        if (i < text.size() && text[i] == 'q') {
            ++i;
            skip_ws();
            if (i < text.size() && text[i] == '^') {
                ++i;
                exp = parse_exponent();
            } else {
                exp = HalfExp::integer(1);
            }
        } else if (!have_coeff) {
            throw error("parse: expected term at position " + std::to_string(i));
        }
        result.add_term(exp, sign * coeff);
        skip_ws();
        if (i >= text.size()) break;
        if (text[i] == '+') {
            sign = 1;
            ++i;
        } else if (text[i] == '-') {
            sign = -1;
            ++i;
        } else {
            throw error("parse: unexpected character '" + std::string(1, text[i]) + "'");
        }
    }
    return result;
}

inline QSeries parse_series(const std::string& text, HalfExp order) {
    return QSeries(parse_polynomial(text), order);
}

}  // namespace qseries
