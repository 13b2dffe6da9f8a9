#include "xrt/symkernel.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

namespace xrt {

int Monomial::a_total() const {
    return std::accumulate(a_pow.begin(), a_pow.end(), 0);
}

void MonomialExpansion::add(const Monomial& m, const AlphaRat& c) {
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

void DerivExpansion::add(const MultiIndex& beta, const AlphaRat& c) {
    if (c.is_zero()) return;
    auto it = terms.find(beta);
    if (it == terms.end()) {
        terms.emplace(beta, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

MonomialExpansion differentiate(const MonomialExpansion& e, int axis) {
    if (axis < 0 || axis >= e.d) throw std::invalid_argument("differentiate: bad axis");
    MonomialExpansion out;
    out.d = e.d;
    const AlphaRat minus_alpha(AlphaPoly::linear(Rat(0), Rat(-1)));
    for (const auto& [m, c] : e.terms) {
        // product rule over the A factors
        for (int i = 0; i < e.d; ++i) {
            if (m.a_pow[i] == 0) continue;
            Rat mult(m.a_pow[i]);
            if (i == axis) {
                // one A_i -> B
                Monomial t = m;
                t.a_pow[i] -= 1;
                t.b_pow += 1;
                out.add(t, c * AlphaRat(mult));
            }
            // one A_i -> -2 A_i A_axis
            Monomial t2 = m;
            t2.a_pow[axis] += 1;
            out.add(t2, c * AlphaRat(Rat(-2) * mult));
        }
        // B^b factor: d(B^b) = -2b A_axis B^b
        if (m.b_pow > 0) {
            Monomial t = m;
            t.a_pow[axis] += 1;
            out.add(t, c * AlphaRat(Rat(-2 * m.b_pow)));
        }
        // C factor: dC = -alpha A_axis C
        Monomial t = m;
        t.a_pow[axis] += 1;
        out.add(t, c * minus_alpha);
    }
    return out;
}

namespace {

std::mutex g_memo_mutex;

MonomialExpansion unit_expansion(int d) {
    MonomialExpansion e;
    e.d = d;
    Monomial one;
    one.a_pow.assign(d, 0);
    e.terms.emplace(one, AlphaRat(Rat(1)));
    return e;
}

}  // namespace

MonomialExpansion kernel_derivative(const MultiIndex& beta, int d) {
    if (static_cast<int>(beta.size()) != d)
        throw std::invalid_argument("kernel_derivative: beta length != d");
    int order = std::accumulate(beta.begin(), beta.end(), 0);
    if (order > 24) throw std::invalid_argument("kernel_derivative: |beta| > 24");
    static std::map<std::pair<int, MultiIndex>, MonomialExpansion> memo;
    std::lock_guard<std::mutex> lk(g_memo_mutex);
    auto key = std::make_pair(d, beta);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    MonomialExpansion e = unit_expansion(d);
    for (int axis = 0; axis < d; ++axis)
        for (int r = 0; r < beta[axis]; ++r) e = differentiate(e, axis);
    memo.emplace(key, e);
    return e;
}

namespace {

DerivExpansion shift_deriv(const DerivExpansion& e, int axis) {
    DerivExpansion out;
    out.d = e.d;
    for (const auto& [b, c] : e.terms) {
        MultiIndex nb = b;
        nb[axis] += 1;
        out.terms.emplace(nb, c);
    }
    return out;
}

DerivExpansion expand_d_impl(const MultiIndex& gamma, int d,
                             std::map<MultiIndex, DerivExpansion>& memo) {
    auto it = memo.find(gamma);
    if (it != memo.end()) return it->second;
    int m = std::accumulate(gamma.begin(), gamma.end(), 0);
    DerivExpansion out;
    out.d = d;
    if (m == 0) {
        MultiIndex zero(d, 0);
        out.terms.emplace(zero, AlphaRat(Rat(1)));
        memo.emplace(gamma, out);
        return out;
    }
    int i = d - 1;
    while (gamma[i] == 0) --i;
    MultiIndex g1 = gamma;
    g1[i] -= 1;
    DerivExpansion prev = expand_d_impl(g1, d, memo);
    // d_i D_{g1} = (2-2m-alpha) D_gamma + cnt * B C prod_{l != slot} A, with
    // cnt repetitions of index i among g1; the B C term is eliminated through
    // the divergence identity, giving
    // D_gamma = [d_i D_{g1} - cnt/(d-m-alpha) * sum_q d_q D_{g1 - e_i + e_q}]
    //           / (2-2m-alpha)
    DerivExpansion acc = shift_deriv(prev, i);
    int cnt = g1[i];
    if (m >= 2 && cnt > 0) {
        DerivExpansion div;
        div.d = d;
        MultiIndex g2 = g1;
        g2[i] -= 1;
        for (int q = 0; q < d; ++q) {
            MultiIndex gq = g2;
            gq[q] += 1;
            DerivExpansion term = shift_deriv(expand_d_impl(gq, d, memo), q);
            for (const auto& [b, c] : term.terms) div.add(b, c);
        }
        AlphaRat factor = AlphaRat(Rat(cnt)).div_linear(Rat(d - m), Rat(-1));
        for (const auto& [b, c] : div.terms) {
            AlphaRat t = c * factor;
            for (auto& x : t.num.c) x = -x;
            acc.add(b, t);
        }
    }
    DerivExpansion result;
    result.d = d;
    for (const auto& [b, c] : acc.terms) result.add(b, c.div_linear(Rat(2 - 2 * m), Rat(-1)));
    memo.emplace(gamma, result);
    return result;
}

}  // namespace

DerivExpansion expand_D(const MultiIndex& gamma, int d) {
    if (static_cast<int>(gamma.size()) != d)
        throw std::invalid_argument("expand_D: gamma length != d");
    for (int g : gamma)
        if (g < 0) throw std::invalid_argument("expand_D: negative index count");
    static std::map<std::pair<int, MultiIndex>, DerivExpansion> memo_by_d;
    std::lock_guard<std::mutex> lk(g_memo_mutex);
    auto key = std::make_pair(d, gamma);
    auto it = memo_by_d.find(key);
    if (it != memo_by_d.end()) return it->second;
    std::map<MultiIndex, DerivExpansion> memo;
    DerivExpansion e = expand_d_impl(gamma, d, memo);
    for (auto& [g, sub] : memo) memo_by_d.emplace(std::make_pair(d, g), sub);
    return e;
}

DerivExpansion expand_polynomial_times_kernel(const std::map<MultiIndex, Rat>& poly, int d) {
    DerivExpansion out;
    out.d = d;
    for (const auto& [gamma, coef] : poly) {
        if (coef == 0) continue;
        DerivExpansion e = expand_D(gamma, d);
        AlphaRat c{coef};
        for (const auto& [b, cb] : e.terms) out.add(b, cb * c);
    }
    return out;
}

void check_lemma_hypothesis(const Rat& alpha, int d, int n) {
    for (int m = 1; m <= n; ++m) {
        if (alpha == 2 - 2 * m)
            throw HypothesisViolation(m, alpha,
                                      "alpha = " + rat_str(alpha) + " makes denominator 2-2m-alpha vanish at m=" +
                                          std::to_string(m));
        if (m >= 2 && alpha == d - m)
            throw HypothesisViolation(m, alpha,
                                      "alpha = " + rat_str(alpha) + " makes denominator d-m-alpha vanish at m=" +
                                          std::to_string(m));
    }
}

std::map<MultiIndex, Rat> specialize(const DerivExpansion& e, const Rat& alpha) {
    std::map<MultiIndex, Rat> out;
    for (const auto& [b, c] : e.terms) {
        Rat v = c.eval(alpha);
        if (v != 0) out.emplace(b, v);
    }
    return out;
}

namespace {

Rat rat_pow(const Rat& x, int p) {
    Rat r = 1;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

}  // namespace

Rat eval_monomials_div_c(const MonomialExpansion& e, const std::vector<Rat>& x,
                         const Rat& alpha) {
    Rat r2 = 0;
    for (const auto& xi : x) r2 += xi * xi;
    if (r2 == 0) throw std::domain_error("evaluation at x = 0");
    Rat acc = 0;
    for (const auto& [m, c] : e.terms) {
        Rat t = c.eval(alpha);
        for (int i = 0; i < e.d; ++i) t *= rat_pow(x[i], m.a_pow[i]);
        t /= rat_pow(r2, m.a_total() + m.b_pow);
        acc += t;
    }
    return acc;
}

Rat eval_deriv_div_c(const DerivExpansion& e, const std::vector<Rat>& x, const Rat& alpha) {
    Rat acc = 0;
    for (const auto& [b, c] : e.terms)
        acc += c.eval(alpha) * eval_monomials_div_c(kernel_derivative(b, e.d), x, alpha);
    return acc;
}

Rat eval_d_monomial_div_c(const MultiIndex& gamma, const std::vector<Rat>& x) {
    Rat r2 = 0;
    for (const auto& xi : x) r2 += xi * xi;
    if (r2 == 0) throw std::domain_error("evaluation at x = 0");
    Rat t = 1;
    int total = 0;
    for (size_t i = 0; i < gamma.size(); ++i) {
        t *= rat_pow(x[i], gamma[i]);
        total += gamma[i];
    }
    return t / rat_pow(r2, total);
}

double CompiledKernelDeriv::eval(const double* x) const {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
    double acc = 0.0;
    for (const auto& t : terms) {
        double v = t.coef;
        for (int i = 0; i < d; ++i)
            for (int p = 0; p < t.a_pow[i]; ++p) v *= x[i];
        acc += v * std::pow(r2, -t.r2_power);
    }
    return acc * std::pow(r2, -0.5 * alpha);
}

CompiledKernelDeriv compile_kernel_derivative(const MultiIndex& beta, int d, double alpha) {
    MonomialExpansion e = kernel_derivative(beta, d);
    CompiledKernelDeriv ck;
    ck.d = d;
    ck.alpha = alpha;
    for (const auto& [m, c] : e.terms) {
        CompiledKernelDeriv::Term t;
        t.coef = c.eval_double(alpha);
        t.a_pow = m.a_pow;
        t.r2_power = m.a_total() + m.b_pow;
        ck.terms.push_back(std::move(t));
    }
    return ck;
}

std::vector<double> kelvin(const std::vector<double>& x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    if (r2 == 0.0) throw std::domain_error("kelvin: x = 0");
    std::vector<double> y = x;
    for (double& yi : y) yi /= r2;
    return y;
}

double kelvin_jacobian_abs(const std::vector<double>& x, int d) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    if (r2 == 0.0) throw std::domain_error("kelvin_jacobian_abs: x = 0");
    return std::pow(r2, -d);
}

std::string format_deriv_expansion(const DerivExpansion& e) {
    std::ostringstream os;
    for (const auto& [b, c] : e.terms) {
        os << "beta=(";
        for (size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
        os << ") coeff=" << c.str() << "\n";
    }
    return os.str();
}

}  // namespace xrt
