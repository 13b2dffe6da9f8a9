#include "xrt/riesz.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <stdexcept>

namespace xrt {

void RieszOrder::validate() const {
    if (d != 2 && d != 3) throw std::invalid_argument("RieszOrder: d must be 2 or 3");
    if (!(alpha < d)) throw std::invalid_argument("RieszOrder: alpha < d required (divergent kernel)");
    if (!(alpha > 0)) throw std::invalid_argument("RieszOrder: alpha > 0 required");
    double r = alpha - std::round(alpha);
    bool integer = std::abs(r) < 1e-12;
    if (integer && std::abs(alpha - (d - 1)) > 1e-12)
        throw std::invalid_argument("RieszOrder: integer alpha must equal d-1");
}

namespace {

std::mutex g_fftw_mutex;

// in-place periodic real convolution on an M^d lattice
void circular_convolve(int d, int M, std::vector<double>& a, const std::vector<double>& b) {
    std::vector<int> dims(d, M);
    size_t total = 1;
    for (int i = 0; i < d; ++i) total *= M;
    size_t cplx = total / M * (M / 2 + 1);
    std::vector<std::complex<double>> fa(cplx), fb(cplx);
    {
        std::lock_guard<std::mutex> lk(g_fftw_mutex);
        fftw_plan pf = fftw_plan_dft_r2c(d, dims.data(), a.data(),
                                         reinterpret_cast<fftw_complex*>(fa.data()), FFTW_ESTIMATE);
        fftw_execute(pf);
        fftw_execute_dft_r2c(pf, const_cast<double*>(b.data()),
                             reinterpret_cast<fftw_complex*>(fb.data()));
        fftw_destroy_plan(pf);
    }
    for (size_t i = 0; i < cplx; ++i) fa[i] *= fb[i] / static_cast<double>(total);
    {
        std::lock_guard<std::mutex> lk(g_fftw_mutex);
        fftw_plan pb = fftw_plan_dft_c2r(d, dims.data(),
                                         reinterpret_cast<fftw_complex*>(fa.data()), a.data(),
                                         FFTW_ESTIMATE);
        fftw_execute(pb);
        fftw_destroy_plan(pb);
    }
}

// Gauss-Legendre rules on [-1, 1]
const double kGx8[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                        0.7966664774136267,  0.9602898564975363};
const double kGw8[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                        0.2223810344533745, 0.1012285362903763};
const double kGx16[16] = {-0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
                          -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
                          -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
                          0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
                          0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
                          0.9894009349916499};
const double kGw16[16] = {0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
                          0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
                          0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
                          0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                          0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
                          0.0271524594117541};

double gl_box(double alpha, int d, const double* lo, const double* hi, int pts) {
    const double* gx = pts == 8 ? kGx8 : kGx16;
    const double* gw = pts == 8 ? kGw8 : kGw16;
    double acc = 0.0;
    if (d == 2) {
        for (int i = 0; i < pts; ++i)
            for (int j = 0; j < pts; ++j) {
                double x = 0.5 * (lo[0] + hi[0]) + 0.5 * (hi[0] - lo[0]) * gx[i];
                double y = 0.5 * (lo[1] + hi[1]) + 0.5 * (hi[1] - lo[1]) * gx[j];
                acc += gw[i] * gw[j] * std::pow(x * x + y * y, -0.5 * alpha);
            }
        acc *= 0.25 * (hi[0] - lo[0]) * (hi[1] - lo[1]);
    } else {
        for (int i = 0; i < pts; ++i)
            for (int j = 0; j < pts; ++j)
                for (int k = 0; k < pts; ++k) {
                    double x = 0.5 * (lo[0] + hi[0]) + 0.5 * (hi[0] - lo[0]) * gx[i];
                    double y = 0.5 * (lo[1] + hi[1]) + 0.5 * (hi[1] - lo[1]) * gx[j];
                    double z = 0.5 * (lo[2] + hi[2]) + 0.5 * (hi[2] - lo[2]) * gx[k];
                    acc += gw[i] * gw[j] * gw[k] * std::pow(x * x + y * y + z * z, -0.5 * alpha);
                }
        acc *= 0.125 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
    }
    return acc;
}

double adaptive_box(double alpha, int d, const double* lo, const double* hi, int depth,
                    double abs_tol) {
    double coarse = gl_box(alpha, d, lo, hi, 8);
    double fine = gl_box(alpha, d, lo, hi, 16);
    if (std::abs(fine - coarse) <= abs_tol || depth >= 8) return fine;
    // bisect every axis
    double acc = 0.0;
    int parts = 1 << d;
    for (int mask = 0; mask < parts; ++mask) {
        double clo[3], chi[3];
        for (int a = 0; a < d; ++a) {
            double mid = 0.5 * (lo[a] + hi[a]);
            if (mask & (1 << a)) {
                clo[a] = mid;
                chi[a] = hi[a];
            } else {
                clo[a] = lo[a];
                chi[a] = mid;
            }
        }
        // children share the tolerance budget
        acc += adaptive_box(alpha, d, clo, chi, depth + 1, abs_tol / parts);
    }
    return acc;
}

}  // namespace

double kernel_cell_average(double alpha, int d, double h) {
    if (!(alpha < d)) throw std::invalid_argument("kernel_cell_average: alpha < d required");
    const double H = 0.5 * h;
    // shell [-H,H]^d \ [-H/2,H/2]^d as a union of (4^d - 2^d) smooth subboxes
    double shell = 0.0;
    double edges[5];
    for (int e = 0; e <= 4; ++e) edges[e] = -H + e * 0.5 * H;
    int boxes = 1;
    for (int a = 0; a < d; ++a) boxes *= 4;
    // first pass for the tolerance scale, second pass adaptive
    double rough = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        double acc = 0.0;
        for (int code = 0; code < boxes; ++code) {
            double lo[3], hi[3];
            int c = code;
            bool inner = true;
            for (int a = 0; a < d; ++a) {
                int e = c % 4;
                c /= 4;
                lo[a] = edges[e];
                hi[a] = edges[e + 1];
                if (e == 0 || e == 3) inner = false;
            }
            if (inner) continue;
            acc += pass == 0 ? gl_box(alpha, d, lo, hi, 8)
                             : adaptive_box(alpha, d, lo, hi, 0, 1e-13 * rough / boxes);
        }
        if (pass == 0)
            rough = std::abs(acc);
        else
            shell = acc;
    }
    double integral = shell / (1.0 - std::pow(2.0, alpha - d));
    double cell = 1.0;
    for (int a = 0; a < d; ++a) cell *= h;
    return integral / cell;
}

GridField riesz_potential(const GridField& f, const RieszOrder& ord) {
    ord.validate();
    f.validate();
    if (f.dim != ord.d) throw std::invalid_argument("riesz_potential: dimension mismatch");
    const int n = f.n;
    const int M = 2 * n;
    const double h = f.h();
    const int d = f.dim;
    size_t total = 1;
    for (int a = 0; a < d; ++a) total *= M;
    std::vector<double> fp(total, 0.0), kp(total, 0.0);
    // embed f at the origin corner
    if (d == 2) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) fp[static_cast<size_t>(j) * M + i] = f.at(i, j);
    } else {
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    fp[(static_cast<size_t>(k) * M + j) * M + i] = f.at(i, j, k);
    }
    // kernel indexed by signed cell offset via wrap-around
    auto off = [M](int m) { return m <= M / 2 ? m : m - M; };
    double center = kernel_cell_average(ord.alpha, d, h);
    if (d == 2) {
        for (int j = 0; j < M; ++j)
            for (int i = 0; i < M; ++i) {
                double x = off(i) * h, y = off(j) * h;
                double r2 = x * x + y * y;
                kp[static_cast<size_t>(j) * M + i] =
                    r2 == 0.0 ? center : std::pow(r2, -0.5 * ord.alpha);
            }
    } else {
        for (int k = 0; k < M; ++k)
            for (int j = 0; j < M; ++j)
                for (int i = 0; i < M; ++i) {
                    double x = off(i) * h, y = off(j) * h, z = off(k) * h;
                    double r2 = x * x + y * y + z * z;
                    kp[(static_cast<size_t>(k) * M + j) * M + i] =
                        r2 == 0.0 ? center : std::pow(r2, -0.5 * ord.alpha);
                }
    }
    circular_convolve(d, M, fp, kp);
    GridField out(d, n);
    double hd = 1.0;
    for (int a = 0; a < d; ++a) hd *= h;
    if (d == 2) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) out.at(i, j) = fp[static_cast<size_t>(j) * M + i] * hd;
    } else {
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    out.at(i, j, k) = fp[(static_cast<size_t>(k) * M + j) * M + i] * hd;
    }
    return out;
}

GridField fractional_laplacian(const GridField& f, double s, std::string* warning) {
    f.validate();
    if (!(s > 0.0) || s > 1.0) throw std::invalid_argument("fractional_laplacian: need 0 < s <= 1");
    const int n = f.n;
    const int d = f.dim;
    const int M = 4 * n;
    const double h = f.h();
    // boundary-decay check: outermost cell ring
    double fmax = f.max_abs();
    double bmax = 0.0;
    if (d == 2) {
        for (int i = 0; i < n; ++i) {
            bmax = std::max({bmax, std::abs(f.at(i, 0)), std::abs(f.at(i, n - 1)),
                             std::abs(f.at(0, i)), std::abs(f.at(n - 1, i))});
        }
    } else {
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    if (i == 0 || i == n - 1 || j == 0 || j == n - 1 || k == 0 || k == n - 1)
                        bmax = std::max(bmax, std::abs(f.at(i, j, k)));
    }
    if (fmax > 0.0 && bmax >= 1e-6 * fmax) {
        if (warning)
            *warning = "fractional_laplacian: field does not decay at the boundary (max boundary "
                       "value " + std::to_string(bmax) + ")";
    }
    size_t total = 1;
    for (int a = 0; a < d; ++a) total *= M;
    std::vector<double> fp(total, 0.0);
    const int o = (M - n) / 2;  // centered embedding
    if (d == 2) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) fp[static_cast<size_t>(j + o) * M + (i + o)] = f.at(i, j);
    } else {
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    fp[(static_cast<size_t>(k + o) * M + (j + o)) * M + (i + o)] = f.at(i, j, k);
    }
    std::vector<int> dims(d, M);
    size_t cplx = total / M * (M / 2 + 1);
    std::vector<std::complex<double>> fc(cplx);
    {
        std::lock_guard<std::mutex> lk(g_fftw_mutex);
        fftw_plan pf = fftw_plan_dft_r2c(d, dims.data(), fp.data(),
                                         reinterpret_cast<fftw_complex*>(fc.data()), FFTW_ESTIMATE);
        fftw_execute(pf);
        fftw_destroy_plan(pf);
    }
    auto xi = [M, h](int m) {
        int mm = m <= M / 2 ? m : m - M;
        return 2.0 * M_PI * mm / (M * h);
    };
    if (d == 2) {
        for (int j = 0; j < M; ++j)
            for (int i = 0; i <= M / 2; ++i) {
                double r2 = xi(i) * xi(i) + xi(j) * xi(j);
                fc[static_cast<size_t>(j) * (M / 2 + 1) + i] *=
                    r2 == 0.0 ? 0.0 : std::pow(r2, s) / total;
            }
    } else {
        for (int k = 0; k < M; ++k)
            for (int j = 0; j < M; ++j)
                for (int i = 0; i <= M / 2; ++i) {
                    double r2 = xi(i) * xi(i) + xi(j) * xi(j) + xi(k) * xi(k);
                    fc[(static_cast<size_t>(k) * M + j) * (M / 2 + 1) + i] *=
                        r2 == 0.0 ? 0.0 : std::pow(r2, s) / total;
                }
    }
    {
        std::lock_guard<std::mutex> lk(g_fftw_mutex);
        fftw_plan pb = fftw_plan_dft_c2r(d, dims.data(),
                                         reinterpret_cast<fftw_complex*>(fc.data()), fp.data(),
                                         FFTW_ESTIMATE);
        fftw_execute(pb);
        fftw_destroy_plan(pb);
    }
    GridField out(d, n);
    if (d == 2) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) out.at(i, j) = fp[static_cast<size_t>(j + o) * M + (i + o)];
    } else {
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    out.at(i, j, k) = fp[(static_cast<size_t>(k + o) * M + (j + o)) * M + (i + o)];
    }
    return out;
}

namespace {

// far-field basis of N f = 2 f * |.|^{-1}: monopole, dipole, quadrupole and
// the r^{-3} monopole correction
constexpr int kFarTerms = 6;

void far_field_basis(double x, double y, double* g) {
    double r = std::sqrt(x * x + y * y);
    double r3 = r * r * r, r5 = r3 * r * r;
    g[0] = 2.0 / r;
    g[1] = 2.0 * x / r3;
    g[2] = 2.0 * y / r3;
    g[3] = 2.0 / r3;
    g[4] = 2.0 * (x * x - y * y) / r5;
    g[5] = 2.0 * x * y / r5;
}

void solve_dense(int nn, std::vector<double>& A, std::vector<double>& b) {
    for (int c = 0; c < nn; ++c) {
        int p = c;
        for (int r = c + 1; r < nn; ++r)
            if (std::abs(A[r * nn + c]) > std::abs(A[p * nn + c])) p = r;
        for (int k = 0; k < nn; ++k) std::swap(A[p * nn + k], A[c * nn + k]);
        std::swap(b[p], b[c]);
        for (int r = c + 1; r < nn; ++r) {
            double f = A[r * nn + c] / A[c * nn + c];
            for (int k = c; k < nn; ++k) A[r * nn + k] -= f * A[c * nn + k];
            b[r] -= f * b[c];
        }
    }
    for (int c = nn - 1; c >= 0; --c) {
        for (int k = c + 1; k < nn; ++k) b[c] -= A[c * nn + k] * b[k];
        b[c] /= A[c * nn + c];
    }
}

}  // namespace

GridField invert_normal(const GridField& Nf, std::string* warning) {
    Nf.validate();
    if (Nf.dim == 3) {
        // plain composition; 3D callers must supply decaying inputs
        GridField out = fractional_laplacian(Nf, 0.5, warning);
        const double cd = 1.0 / (4.0 * M_PI * M_PI);  // (2 pi |S^1|)^{-1}
        for (double& x : out.v) x *= cd;
        return out;
    }
    const int n = Nf.n;
    const int M = 4 * n;
    const double h = Nf.h();
    const int o = (M - n) / 2;
    // N f decays like a multipole series, so zero-padding the truncated field
    // before the |xi| multiplier would leave an O(1) error. Fit the far field
    // on a boundary ring and continue Nf smoothly into the padding instead.
    std::vector<double> A(kFarTerms * kFarTerms, 0.0), b(kFarTerms, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double x = Nf.center(i), y = Nf.center(j);
            double r = std::sqrt(x * x + y * y);
            if (r < 0.88 || r > 0.99) continue;
            double g[kFarTerms];
            far_field_basis(x, y, g);
            for (int a = 0; a < kFarTerms; ++a) {
                for (int c = 0; c < kFarTerms; ++c) A[a * kFarTerms + c] += g[a] * g[c];
                b[a] += g[a] * Nf.at(i, j);
            }
        }
    solve_dense(kFarTerms, A, b);
    std::vector<double> fp(static_cast<size_t>(M) * M);
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < M; ++i) {
            double val;
            if (i >= o && i < o + n && j >= o && j < o + n) {
                val = Nf.at(i - o, j - o);
            } else {
                double x = (i + 0.5 - M / 2) * h, y = (j + 0.5 - M / 2) * h;
                double r = std::sqrt(x * x + y * y);
                double cut =
                    r <= 3.0 ? 1.0
                             : (r >= 3.8 ? 0.0 : 0.5 * (1.0 + std::cos(M_PI * (r - 3.0) / 0.8)));
                double g[kFarTerms];
                far_field_basis(x, y, g);
                val = 0.0;
                for (int a = 0; a < kFarTerms; ++a) val += b[a] * g[a];
                val *= cut;
            }
            fp[static_cast<size_t>(j) * M + i] = val;
        }
    size_t cplx = static_cast<size_t>(M) * (M / 2 + 1);
    std::vector<std::complex<double>> fc(cplx);
    {
        std::lock_guard<std::mutex> lk(g_fftw_mutex);
        fftw_plan pf = fftw_plan_dft_r2c_2d(M, M, fp.data(),
                                            reinterpret_cast<fftw_complex*>(fc.data()),
                                            FFTW_ESTIMATE);
        fftw_execute(pf);
        fftw_destroy_plan(pf);
    }
    auto xi = [M, h](int m) {
        int mm = m <= M / 2 ? m : m - M;
        return 2.0 * M_PI * mm / (M * h);
    };
    // raised-cosine apodization at half the grid Nyquist: the |xi| multiplier
    // amplifies discretization jitter in X*X outputs linearly in frequency
    const double xcut = 0.5 * M_PI / h;
    const double norm = static_cast<double>(M) * M;
    for (int j = 0; j < M; ++j)
        for (int i = 0; i <= M / 2; ++i) {
            double r = std::sqrt(xi(i) * xi(i) + xi(j) * xi(j));
            double w = r >= xcut ? 0.0 : 0.5 * (1.0 + std::cos(M_PI * r / xcut));
            fc[static_cast<size_t>(j) * (M / 2 + 1) + i] *= r * w / norm;
        }
    {
        std::lock_guard<std::mutex> lk(g_fftw_mutex);
        fftw_plan pb = fftw_plan_dft_c2r_2d(M, M, reinterpret_cast<fftw_complex*>(fc.data()),
                                            fp.data(), FFTW_ESTIMATE);
        fftw_execute(pb);
        fftw_destroy_plan(pb);
    }
    GridField out(2, n);
    const double cd = 1.0 / (4.0 * M_PI);  // (2 pi |S^0|)^{-1}
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out.at(i, j) = cd * fp[static_cast<size_t>(j + o) * M + (i + o)];
    return out;
}

std::vector<std::pair<MultiIndex, double>> potential_derivatives(
    const GridField& f, const RieszOrder& ord, const std::vector<double>& x0, int max_order) {
    ord.validate();
    f.validate();
    if (f.dim != ord.d || static_cast<int>(x0.size()) != ord.d)
        throw std::invalid_argument("potential_derivatives: dimension mismatch");
    if (max_order < 0 || max_order > 12)
        throw std::invalid_argument("potential_derivatives: max_order in [0, 12]");
    const int d = f.dim;
    const int n = f.n;
    const double h = f.h();
    const double clearance = 4.0 * h;
    // require f = 0 on a ball around x0
    auto cell_pos = [&](size_t c, double* p) {
        size_t rem = c;
        for (int a = 0; a < d; ++a) {
            p[a] = f.center(static_cast<int>(rem % n));
            rem /= n;
        }
    };
    for (size_t c = 0; c < f.size(); ++c) {
        if (f.v[c] == 0.0) continue;
        double p[3];
        cell_pos(c, p);
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += (p[a] - x0[a]) * (p[a] - x0[a]);
        if (r2 < clearance * clearance)
            throw std::invalid_argument("potential_derivatives: f nonzero within 4h of x0");
    }
    // enumerate multi-indices of order <= max_order
    std::vector<MultiIndex> betas;
    MultiIndex cur(d, 0);
    std::function<void(int, int)> rec = [&](int axis, int budget) {
        if (axis == d) {
            betas.push_back(cur);
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            cur[axis] = v;
            rec(axis + 1, budget - v);
        }
        cur[axis] = 0;
    };
    rec(0, max_order);
    double hd = 1.0;
    for (int a = 0; a < d; ++a) hd *= h;
    std::vector<std::pair<MultiIndex, double>> out;
    out.reserve(betas.size());
    // pair cells with their reflection through the grid center so that odd
    // kernel parities cancel exactly for symmetric f and x0 = 0
    size_t ncells = f.size();
    for (const auto& beta : betas) {
        CompiledKernelDeriv ck = compile_kernel_derivative(beta, d, ord.alpha);
        double acc = 0.0, comp = 0.0;  // Neumaier compensation
        auto accumulate = [&](double t) {
            double s = acc + t;
            if (std::abs(acc) >= std::abs(t))
                comp += (acc - s) + t;
            else
                comp += (t - s) + acc;
            acc = s;
        };
        std::vector<size_t> strides(d);
        strides[0] = 1;
        for (int a = 1; a < d; ++a) strides[a] = strides[a - 1] * n;
        for (size_t c = 0; c < ncells; ++c) {
            // mirrored index
            size_t rem = c, cm = 0;
            for (int a = 0; a < d; ++a) {
                cm += static_cast<size_t>(n - 1 - rem % n) * strides[a];
                rem /= n;
            }
            if (cm < c) continue;  // handled with its partner
            double pair_sum = 0.0;
            auto add_cell = [&](size_t cc) {
                if (f.v[cc] == 0.0) return;
                double p[3], u[3];
                cell_pos(cc, p);
                for (int a = 0; a < d; ++a) u[a] = x0[a] - p[a];
                pair_sum += f.v[cc] * ck.eval(u);
            };
            add_cell(c);
            if (cm != c) add_cell(cm);
            if (pair_sum != 0.0) accumulate(pair_sum * hd);
        }
        out.emplace_back(beta, acc + comp);
    }
    return out;
}

}  // namespace xrt
