// Base types for the q-series engine: arbitrary-precision integer
// coefficients and exponents on the half-integer grid.
#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace qseries {

// Coefficient ring: exact integers. Every identity in scope has integer
// coefficients; there is no floating point anywhere in the engine.
using Int = mpz_class;

inline std::string to_string(const Int& n) { return n.get_str(); }

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an infinite sum cannot certify that its discarded tail lies
// beyond the truncation order. Callers turn this into a loud
// "tail-uncertified" status, never into a silent pass.
class tail_error : public error {
public:
    explicit tail_error(const std::string& what) : error(what) {}
};

// Exponent of q counted in half-steps: HalfExp{h} means q^(h/2).
// The half grid accommodates specializations like rho = -q^(k/2).
struct HalfExp {
    std::int64_t halves = 0;

    static constexpr HalfExp integer(std::int64_t n) { return HalfExp{2 * n}; }
    static constexpr HalfExp half_steps(std::int64_t h) { return HalfExp{h}; }

    constexpr bool is_integral() const { return halves % 2 == 0; }

    // The exponent as an integer; only valid on the integral sublattice.
    constexpr std::int64_t whole() const {
        if (halves % 2 != 0) throw error("HalfExp::whole on non-integral exponent");
        return halves / 2;
    }

    friend constexpr auto operator<=>(HalfExp a, HalfExp b) = default;
    friend constexpr HalfExp operator+(HalfExp a, HalfExp b) { return {a.halves + b.halves}; }
    friend constexpr HalfExp operator-(HalfExp a, HalfExp b) { return {a.halves - b.halves}; }
    constexpr HalfExp operator-() const { return {-halves}; }
    friend constexpr HalfExp operator*(std::int64_t k, HalfExp e) { return {k * e.halves}; }

    // "3", "-2", "1/2", "-3/2"
    std::string str() const {
        if (halves % 2 == 0) return std::to_string(halves / 2);
        return std::to_string(halves) + "/2";
    }
};

// A signed power of q: sign * q^(exp). The base objects of Pochhammer
// symbols, e.g. -q^(1/2) or q^2.
struct SignedPower {
    int sign = 1;  // +1 or -1
    HalfExp exp{};

    static SignedPower plus(HalfExp e) { return {+1, e}; }
    static SignedPower minus(HalfExp e) { return {-1, e}; }
    static SignedPower q_to(std::int64_t n) { return {+1, HalfExp::integer(n)}; }

    bool is_one() const { return sign == 1 && exp.halves == 0; }

    std::string str() const {
        std::string s = sign < 0 ? "-" : "";
        if (exp.halves == 0) return s + "1";
        if (exp == HalfExp::integer(1)) return s + "q";
        return s + "q^(" + exp.str() + ")";
    }

    friend bool operator==(const SignedPower&, const SignedPower&) = default;
};

}  // namespace qseries
