#include "xrt/abel.hpp"

#include <cmath>
#include <stdexcept>

namespace xrt {

const mpz_class& ChebTable::coeff(int k, int l) const {
    static const mpz_class zero = 0;
    if (k < 0 || k > k_max) throw std::out_of_range("ChebTable: k out of range");
    if (l < 0 || l > k) return zero;
    return t[k][l];
}

ChebTable chebyshev_coeffs(int k_max) {
    if (k_max < 0 || k_max > 64) throw std::invalid_argument("chebyshev_coeffs: k_max in [0,64]");
    ChebTable tbl;
    tbl.k_max = k_max;
    tbl.t.resize(k_max + 1);
    tbl.t[0] = {1};
    if (k_max >= 1) tbl.t[1] = {0, 1};
    for (int k = 2; k <= k_max; ++k) {
        std::vector<mpz_class> cur(k + 1, 0);
        for (int l = 0; l < k; ++l) cur[l + 1] += 2 * tbl.t[k - 1][l];
        for (int l = 0; l <= k - 2; ++l) cur[l] -= tbl.t[k - 2][l];
        tbl.t[k] = std::move(cur);
    }
    return tbl;
}

mpz_class double_factorial(long n) {
    mpz_class r = 1;
    for (long k = n; k >= 2; k -= 2) r *= k;
    return r;
}

const mpz_class& AbelTable::coeff(int k, int n) const {
    if (k < 0 || k > k_max || n < 0 || n > n_max)
        throw std::out_of_range("AbelTable: index out of range");
    return A[k][n];
}

namespace {

mpz_class factorial(long n) {
    mpz_class r = 1;
    for (long k = 2; k <= n; ++k) r *= k;
    return r;
}

mpz_class binom(long n, long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// closed forms valid for n > k with matching parity
mpq_class closed_form(const ChebTable& cheb, int k, int n) {
    mpq_class acc = 0;
    if (n % 2 == 0) {
        for (int m = 0; m <= k / 2; ++m)
            acc += mpq_class(cheb.coeff(k, 2 * m) * double_factorial(n - 2 * m - 1),
                             double_factorial(n - 2 * m));
    } else {
        for (int m = 0; 2 * m + 1 <= k; ++m)
            acc += mpq_class(cheb.coeff(k, 2 * m + 1) * double_factorial(n - 2 * m - 2),
                             double_factorial(n - 2 * m - 1));
    }
    acc *= factorial(n);
    mpq_class r = acc;
    r.canonicalize();
    return r;
}

}  // namespace

AbelTable abel_coefficients(int k_max, int n_max) {
    ChebTable cheb = chebyshev_coeffs(k_max);
    AbelTable tbl;
    tbl.k_max = k_max;
    tbl.n_max = n_max;
    tbl.A.assign(k_max + 1, std::vector<mpz_class>(n_max + 1, 0));
    // A_0^n = ((n-1)!!)^2 for even n, 0 for odd n
    std::vector<mpz_class> A0(n_max + 1, 0);
    for (int n = 0; n <= n_max; n += 2) {
        mpz_class df = double_factorial(n - 1);
        A0[n] = df * df;
    }
    tbl.A[0] = A0;
    for (int k = 1; k <= k_max; ++k) {
        for (int n = 0; n <= n_max; ++n) {
            mpz_class acc = 0;
            for (int l = 0; l <= std::min(n, k); ++l) {
                if ((n - l) % 2 != 0) continue;
                acc += binom(n, l) * factorial(l) * cheb.coeff(k, l) * A0[n - l];
            }
            tbl.A[k][n] = acc;
            if (n > k && (n - k) % 2 == 0) {
                mpq_class cf = closed_form(cheb, k, n);
                if (cf != mpq_class(acc))
                    throw std::logic_error("abel_coefficients: closed form disagrees with sum");
            }
        }
    }
    return tbl;
}

mpq_class abel_coefficients_oracle(int k, int n) {
    if (k < 0 || k > 64) throw std::invalid_argument("abel_coefficients_oracle: k in [0,64]");
    if (n < 0 || n > 200) throw std::invalid_argument("abel_coefficients_oracle: n in [0,200]");
    ChebTable cheb = chebyshev_coeffs(k);
    // (1-u^2)^{-1/2} = sum_m (2m-1)!!/(2m)!! u^{2m}
    mpq_class coeff = 0;
    for (int l = 0; l <= std::min(n, k); ++l) {
        if ((n - l) % 2 != 0) continue;
        long m = (n - l) / 2;
        coeff += mpq_class(cheb.coeff(k, l) * double_factorial(2 * m - 1),
                           double_factorial(2 * m));
    }
    coeff *= factorial(n);
    coeff.canonicalize();
    return coeff;
}

int positivity_threshold(const AbelTable& tbl, int k) {
    if (k < 0 || k > tbl.k_max) throw std::invalid_argument("positivity_threshold: k out of range");
    if (tbl.n_max < 4 * k)
        throw std::invalid_argument("positivity_threshold: need n_max >= 4k");
    int parity = k % 2;
    int last_bad = -1;
    for (int n = parity; n <= tbl.n_max; n += 2)
        if (tbl.A[k][n] <= 0) last_bad = n;
    if (last_bad >= 0 && last_bad + 2 > tbl.n_max)
        throw std::runtime_error("positivity_threshold: tail not positive within n_max");
    return last_bad < 0 ? parity : last_bad + 2;
}

int positivity_threshold(int k, int n_max) {
    return positivity_threshold(abel_coefficients(k, n_max), k);
}

std::vector<RadialProfile> angular_decompose(const GridField& f, int k_max) {
    if (f.dim != 2) throw std::invalid_argument("angular_decompose: 2D fields only");
    const int n = f.n;
    const double h = f.h();
    const double inv_h = 1.0 / h;
    const int m = n / 2;
    auto sample = [&](double x, double y) {
        double u = (x + 1.0) * inv_h - 0.5;
        double w = (y + 1.0) * inv_h - 0.5;
        int i0 = static_cast<int>(std::floor(u));
        int j0 = static_cast<int>(std::floor(w));
        double fu = u - i0, fw = w - j0;
        double acc = 0.0;
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                int i = i0 + di, j = j0 + dj;
                if (i < 0 || i >= n || j < 0 || j >= n) continue;
                acc += (di ? fu : 1 - fu) * (dj ? fw : 1 - fw) * f.at(i, j);
            }
        return acc;
    };
    std::vector<RadialProfile> out(2 * k_max + 1);
    for (auto& p : out) p.v.assign(m, {0.0, 0.0});
    for (int j = 0; j < m; ++j) {
        double r = (j + 0.5) / m;
        int M = 8 * static_cast<int>(std::ceil(M_PI * r * inv_h));
        M = std::max({M, 8, 4 * (k_max + 1)});
        if (k_max > M / 4)
            throw std::invalid_argument("angular_decompose: k_max exceeds aliasing bound");
        std::vector<double> ring(M);
        for (int q = 0; q < M; ++q) {
            double th = 2.0 * M_PI * q / M;
            ring[q] = sample(r * std::cos(th), r * std::sin(th));
        }
        for (int k = -k_max; k <= k_max; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (int q = 0; q < M; ++q)
                acc += ring[q] * std::polar(1.0, -k * 2.0 * M_PI * q / M);
            out[k + k_max].v[j] = acc / static_cast<double>(M);
        }
    }
    return out;
}

namespace {

// 8-point Gauss-Legendre on [-1, 1]
const double kGlx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                        0.7966664774136267,  0.9602898564975363};
const double kGlw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                        0.2223810344533745, 0.1012285362903763};

double cheb_eval(int k, double u) {
    if (k == 0) return 1.0;
    double tm = 1.0, tc = u;
    for (int i = 1; i < k; ++i) {
        double tn = 2.0 * u * tc - tm;
        tm = tc;
        tc = tn;
    }
    return tc;
}

template <class G>
auto abel_quad(int k, G&& g, double z, double w_lo, double w_hi, int panels)
    -> decltype(g(0.0)) {
    using V = decltype(g(0.0));
    V acc{};
    if (w_hi <= w_lo) return acc;
    double dw = (w_hi - w_lo) / panels;
    for (int p = 0; p < panels; ++p) {
        double a = w_lo + p * dw;
        for (int q = 0; q < 8; ++q) {
            double w = a + 0.5 * dw * (1.0 + kGlx[q]);
            double y = std::sqrt(z * z + w * w);
            double u = y > 0.0 ? z / y : 0.0;
            acc += (0.5 * dw * kGlw[q]) * (2.0 * cheb_eval(k, u)) * g(y);
        }
    }
    return acc;
}

}  // namespace

double abel_apply_at(int k, const std::function<double(double)>& g, double z,
                     double y_upper) {
    if (z < 0.0) throw std::invalid_argument("abel_apply_at: z >= 0 required");
    if (z >= y_upper) return 0.0;
    double w_hi = std::sqrt(y_upper * y_upper - z * z);
    return abel_quad(k, g, z, 0.0, w_hi, 256);
}

RadialProfile abel_apply(int k, const RadialProfile& g) {
    const int m = g.m();
    if (m == 0) throw std::invalid_argument("abel_apply: empty profile");
    auto interp = [&](double y) -> std::complex<double> {
        if (y < g.support_lo || y > g.support_hi) return {0.0, 0.0};
        double u = y * m - 0.5;
        int j0 = static_cast<int>(std::floor(u));
        double fu = u - j0;
        std::complex<double> a = (j0 >= 0 && j0 < m) ? g.v[j0] : std::complex<double>{};
        std::complex<double> b = (j0 + 1 >= 0 && j0 + 1 < m) ? g.v[j0 + 1] : std::complex<double>{};
        return (1.0 - fu) * a + fu * b;
    };
    RadialProfile out;
    out.v.assign(m, {0.0, 0.0});
    out.support_lo = 0.0;
    out.support_hi = g.support_hi;
    int panels = std::max(64, m / 2);
    for (int j = 0; j < m; ++j) {
        double z = out.r(j);
        if (z >= g.support_hi) continue;  // transform vanishes past the support
        double w_lo = g.support_lo > z
                          ? std::sqrt(g.support_lo * g.support_lo - z * z)
                          : 0.0;
        double w_hi = std::sqrt(g.support_hi * g.support_hi - z * z);
        out.v[j] = abel_quad(k, interp, z, w_lo, w_hi, panels);
    }
    return out;
}

}  // namespace xrt
