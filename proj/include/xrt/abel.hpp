#pragma once

#include <gmpxx.h>

#include <complex>
#include <functional>
#include <vector>

#include "xrt/grid.hpp"

namespace xrt {

// Chebyshev coefficients: t[k][l] is the coefficient of x^l in T_k(x).
struct ChebTable {
    int k_max = 0;
    std::vector<std::vector<mpz_class>> t;
    const mpz_class& coeff(int k, int l) const;
};

ChebTable chebyshev_coeffs(int k_max);  // k_max <= 64

// Derivative coefficients of the generalized Abel kernel:
// A[k][n] = d_z^n { T_k(z/y) [1-(z/y)^2]^{-1/2} } |_{z=0} * y^n.
struct AbelTable {
    int k_max = 0, n_max = 0;
    std::vector<std::vector<mpz_class>> A;
    const mpz_class& coeff(int k, int n) const;
};

// Exact table by the binomial sum A_k^n = sum_l C(n,l) l! t_k^l A_0^{n-l},
// cross-checked against the closed even/odd forms (exact agreement required).
AbelTable abel_coefficients(int k_max, int n_max);

// Independent oracle: n! times the u^n Taylor coefficient of
// T_k(u) (1-u^2)^{-1/2}.
mpq_class abel_coefficients_oracle(int k, int n);  // n <= 200, k <= 64

mpz_class double_factorial(long n);  // (-1)!! = 1

// Least N such that A_k^n > 0 for every matching-parity n in [N, n_max].
// Throws if the tail at n_max is not positive.
int positivity_threshold(int k, int n_max);
int positivity_threshold(const AbelTable& tbl, int k);

// Angular Fourier profile a_k(r) on a uniform radial grid over [0, 1].
struct RadialProfile {
    std::vector<std::complex<double>> v;
    double support_lo = 0.0, support_hi = 1.0;
    int m() const { return static_cast<int>(v.size()); }
    double r(int j) const { return (j + 0.5) / m(); }
};

// Angular modes k = -k_max..k_max of a 2D field; result[k + k_max] is a_k.
std::vector<RadialProfile> angular_decompose(const GridField& f, int k_max);

// Generalized Abel transform A_k g(z) = 2 int_z^1 T_k(z/y)[1-(z/y)^2]^{-1/2}
// g(y) dy, computed after the substitution w = sqrt(y^2 - z^2).
RadialProfile abel_apply(int k, const RadialProfile& g);
double abel_apply_at(int k, const std::function<double(double)>& g, double z,
                     double y_upper = 1.0);

}  // namespace xrt
