#include "xrt/rational.hpp"

#include <sstream>

namespace xrt {

AlphaPoly::AlphaPoly(Rat constant) {
    if (constant != 0) c.push_back(std::move(constant));
}

AlphaPoly AlphaPoly::linear(Rat a0, Rat a1) {
    AlphaPoly p;
    p.c = {std::move(a0), std::move(a1)};
    p.trim();
    return p;
}

void AlphaPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Rat AlphaPoly::eval(const Rat& alpha) const {
    Rat acc = 0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * alpha + c[i];
    return acc;
}

AlphaPoly AlphaPoly::operator+(const AlphaPoly& o) const {
    AlphaPoly r;
    r.c.resize(std::max(c.size(), o.c.size()), Rat(0));
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    r.trim();
    return r;
}

AlphaPoly AlphaPoly::operator-(const AlphaPoly& o) const {
    AlphaPoly r;
    r.c.resize(std::max(c.size(), o.c.size()), Rat(0));
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] -= o.c[i];
    r.trim();
    return r;
}

AlphaPoly AlphaPoly::operator*(const AlphaPoly& o) const {
    AlphaPoly r;
    if (c.empty() || o.c.empty()) return r;
    r.c.assign(c.size() + o.c.size() - 1, Rat(0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    r.trim();
    return r;
}

bool AlphaPoly::divide_linear(const Rat& a0, const Rat& a1, AlphaPoly& quotient) const {
    if (a1 == 0) {
        if (a0 == 0) throw std::domain_error("division by zero polynomial");
        quotient = *this;
        for (auto& q : quotient.c) q /= a0;
        return true;
    }
    if (c.empty()) {
        quotient = AlphaPoly();
        return true;
    }
    // synthetic division at root -a0/a1, then scale by 1/a1
    Rat root = -a0 / a1;
    std::vector<Rat> q(c.size() - 1, Rat(0));
    Rat carry = 0;
    for (size_t i = c.size(); i-- > 0;) {
        Rat cur = c[i] + carry * root;
        if (i == 0) {
            if (cur != 0) return false;  // nonzero remainder
        } else {
            q[i - 1] = cur;
            carry = cur;
        }
    }
    quotient.c = std::move(q);
    for (auto& x : quotient.c) x /= a1;
    quotient.trim();
    return true;
}

std::string AlphaPoly::str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        if (!first) os << (c[i] > 0 ? " + " : " - ");
        else if (c[i] < 0) os << "-";
        Rat a = abs(c[i]);
        if (i == 0 || a != 1) os << rat_str(a);
        if (i >= 1) {
            if (a != 1) os << "*";
            os << "a";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

void AlphaRat::cancel() {
    if (num.is_zero()) {
        den.clear();
        return;
    }
    std::vector<std::pair<Rat, Rat>> kept;
    for (auto& f : den) {
        AlphaPoly q;
        if (num.divide_linear(f.first, f.second, q))
            num = std::move(q);
        else
            kept.push_back(f);
    }
    den = std::move(kept);
}

AlphaRat AlphaRat::operator*(const AlphaRat& o) const {
    AlphaRat r;
    r.num = num * o.num;
    r.den = den;
    r.den.insert(r.den.end(), o.den.begin(), o.den.end());
    r.cancel();
    return r;
}

AlphaRat AlphaRat::div_linear(Rat a, Rat b) const {
    if (a == 0 && b == 0) throw std::domain_error("div_linear: zero factor");
    AlphaRat r = *this;
    r.den.emplace_back(std::move(a), std::move(b));
    r.cancel();
    return r;
}

namespace {
AlphaPoly factor_product(const std::vector<std::pair<Rat, Rat>>& fs) {
    AlphaPoly p(Rat(1));
    for (const auto& f : fs) p = p * AlphaPoly::linear(f.first, f.second);
    return p;
}
}  // namespace

AlphaRat AlphaRat::operator+(const AlphaRat& o) const {
    // common denominator: this->den + the factors of o not matched one-to-one
    // (simple approach: full product, then cancel)
    AlphaRat r;
    r.num = num * factor_product(o.den) + o.num * factor_product(den);
    r.den = den;
    r.den.insert(r.den.end(), o.den.begin(), o.den.end());
    r.cancel();
    return r;
}

AlphaRat AlphaRat::operator-(const AlphaRat& o) const {
    AlphaRat neg = o;
    for (auto& x : neg.num.c) x = -x;
    return *this + neg;
}

AlphaRat& AlphaRat::operator+=(const AlphaRat& o) {
    *this = *this + o;
    return *this;
}

bool AlphaRat::equals(const AlphaRat& o) const {
    return num * factor_product(o.den) == o.num * factor_product(den);
}

Rat AlphaRat::eval(const Rat& alpha) const {
    Rat d = 1;
    for (const auto& f : den) {
        Rat fv = f.first + f.second * alpha;
        if (fv == 0)
            throw std::domain_error("vanishing denominator factor " +
                                    AlphaPoly::linear(f.first, f.second).str() + " at alpha=" +
                                    rat_str(alpha));
        d *= fv;
    }
    return num.eval(alpha) / d;
}

double AlphaRat::eval_double(double alpha) const {
    double nv = 0.0;
    for (size_t i = num.c.size(); i-- > 0;) nv = nv * alpha + num.c[i].get_d();
    double d = 1.0;
    for (const auto& f : den) d *= f.first.get_d() + f.second.get_d() * alpha;
    return nv / d;
}

std::string AlphaRat::str() const {
    if (den.empty()) return num.str();
    std::ostringstream os;
    os << "(" << num.str() << ")/(";
    for (size_t i = 0; i < den.size(); ++i) {
        if (i) os << "*";
        os << "(" << AlphaPoly::linear(den[i].first, den[i].second).str() << ")";
    }
    os << ")";
    return os.str();
}

std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

Rat parse_rat(const std::string& s) {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        mpz_class den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        Rat q(mpz_class(digits, 10), den);  // base fixed: leading zeros are not octal
        q.canonicalize();
        return q;
    }
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

}  // namespace xrt
