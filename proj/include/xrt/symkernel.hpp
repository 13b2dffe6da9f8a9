#pragma once

#include <map>
#include <string>
#include <vector>

#include "xrt/rational.hpp"

namespace xrt {

// Symbolic algebra on A_i = x_i|x|^-2, B = |x|^-2 and C = |x|^-alpha,
// closed under differentiation by
//   d_j A_i = delta_ij B - 2 A_i A_j,  d_j B = -2 A_j B,  d_j C = -alpha A_j C.

// Product (prod_i A_i^{a_pow[i]}) * B^b_pow * C, canonical by construction.
struct Monomial {
    std::vector<int> a_pow;  // length d
    int b_pow = 0;

    int a_total() const;
    // homogeneity degree in |x| is -(a_total + 2*b_pow) - alpha
    auto operator<=>(const Monomial&) const = default;
};

using MultiIndex = std::vector<int>;  // derivative multi-index, length d

struct MonomialExpansion {
    int d = 2;
    std::map<Monomial, AlphaRat> terms;
    void add(const Monomial& m, const AlphaRat& c);
};

struct DerivExpansion {
    int d = 2;
    std::map<MultiIndex, AlphaRat> terms;  // coefficients of d^beta K_alpha
    void add(const MultiIndex& beta, const AlphaRat& c);
};

struct HypothesisViolation : std::domain_error {
    int m;        // induction step with vanishing denominator
    Rat alpha;
    HypothesisViolation(int m_, Rat a, const std::string& what)
        : std::domain_error(what), m(m_), alpha(std::move(a)) {}
};

MonomialExpansion differentiate(const MonomialExpansion& e, int axis);

// Exact monomial expansion of d^beta K_alpha, symbolic in alpha. |beta| <= 24.
MonomialExpansion kernel_derivative(const MultiIndex& beta, int d);

// D_gamma = (prod_i A_i^{gamma_i}) C as a combination of d^beta K_alpha with
// |beta| = |gamma|, symbolic in alpha.
DerivExpansion expand_D(const MultiIndex& gamma, int d);

// p(K(x)) K_alpha for a polynomial p given as {gamma -> coefficient}.
DerivExpansion expand_polynomial_times_kernel(const std::map<MultiIndex, Rat>& poly, int d);

// Rejects exactly the alpha excluded by the expansion denominators up to
// order n: alpha = 2-2m (1<=m<=n) or alpha = d-m (2<=m<=n).
void check_lemma_hypothesis(const Rat& alpha, int d, int n);

// Specialization at rational alpha; throws on a vanishing denominator.
std::map<MultiIndex, Rat> specialize(const DerivExpansion& e, const Rat& alpha);

// Exact evaluation at rational points. Values carry a common factor
// C = |x|^-alpha which is divided out, so results are exact rationals.
Rat eval_monomials_div_c(const MonomialExpansion& e, const std::vector<Rat>& x, const Rat& alpha);
Rat eval_deriv_div_c(const DerivExpansion& e, const std::vector<Rat>& x, const Rat& alpha);
Rat eval_d_monomial_div_c(const MultiIndex& gamma, const std::vector<Rat>& x);

// Fast numeric evaluation of d^beta K_alpha at a point (includes the
// |x|^-alpha factor).
struct CompiledKernelDeriv {
    struct Term {
        double coef;
        std::vector<int> a_pow;
        int r2_power;  // a_total + b_pow
    };
    int d;
    double alpha;
    std::vector<Term> terms;
    double eval(const double* x) const;
};
CompiledKernelDeriv compile_kernel_derivative(const MultiIndex& beta, int d, double alpha);

// Kelvin transform x -> x|x|^-2 and its Jacobian magnitude |x|^-2d.
std::vector<double> kelvin(const std::vector<double>& x);
double kelvin_jacobian_abs(const std::vector<double>& x, int d);

std::string format_deriv_expansion(const DerivExpansion& e);

}  // namespace xrt
