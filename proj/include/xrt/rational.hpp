#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xrt {

using Rat = mpq_class;

// Polynomial in one indeterminate (the Riesz order alpha) over Q.
struct AlphaPoly {
    std::vector<Rat> c;  // c[i] * alpha^i, no trailing zeros

    AlphaPoly() = default;
    AlphaPoly(Rat constant);
    static AlphaPoly linear(Rat a0, Rat a1);  // a0 + a1*alpha

    bool is_zero() const { return c.empty(); }
    void trim();
    Rat eval(const Rat& alpha) const;

    AlphaPoly operator+(const AlphaPoly& o) const;
    AlphaPoly operator-(const AlphaPoly& o) const;
    AlphaPoly operator*(const AlphaPoly& o) const;
    bool operator==(const AlphaPoly& o) const { return c == o.c; }

    // exact division by (a0 + a1*alpha); returns false if not divisible
    bool divide_linear(const Rat& a0, const Rat& a1, AlphaPoly& quotient) const;
    std::string str() const;
};

// Rational function of alpha with the denominator kept as a product of
// linear factors (a + b*alpha); this makes the set of excluded alpha values
// explicit.
struct AlphaRat {
    AlphaPoly num;
    std::vector<std::pair<Rat, Rat>> den;  // factors (a, b) -> a + b*alpha

    AlphaRat() = default;
    AlphaRat(Rat constant) : num(std::move(constant)) {}
    AlphaRat(AlphaPoly p) : num(std::move(p)) {}

    bool is_zero() const { return num.is_zero(); }
    void cancel();  // divide out denominator factors that divide num

    AlphaRat operator+(const AlphaRat& o) const;
    AlphaRat operator-(const AlphaRat& o) const;
    AlphaRat operator*(const AlphaRat& o) const;
    AlphaRat& operator+=(const AlphaRat& o);
    // multiply by 1 / (a + b*alpha)
    AlphaRat div_linear(Rat a, Rat b) const;

    bool equals(const AlphaRat& o) const;  // cross-multiplied comparison
    // throws std::domain_error naming the vanishing factor if denominator is 0
    Rat eval(const Rat& alpha) const;
    double eval_double(double alpha) const;
    std::string str() const;
};

std::string rat_str(const Rat& q);
Rat parse_rat(const std::string& s);  // "p/q" or integer or decimal

}  // namespace xrt
