// Acceptance gate: runs the ten headline checks end to end and prints one
// PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "xrt/abel.hpp"
#include "xrt/grid.hpp"
#include "xrt/recon.hpp"
#include "xrt/riesz.hpp"
#include "xrt/seismo.hpp"
#include "xrt/symkernel.hpp"
#include "xrt/xray.hpp"

using namespace xrt;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, buf);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

GridField random_field(int n, uint64_t seed) {
    GridField f(2, n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (auto& v : f.v) v = uni(rng);
    return f;
}

GridField smooth_bump(int n, double r, double cx = 0.0) {
    PhantomSpec spec;
    PhantomComponent pc;
    pc.region = RegionSpec::ball({cx, 0, 0}, r);
    pc.profile = PhantomComponent::Profile::RadialBump;
    spec.parts.push_back(pc);
    return rasterize(spec, n, 2);
}

GridField annulus_bump(int n, double ri, double ro) {
    PhantomSpec spec;
    PhantomComponent pc;
    pc.region = RegionSpec::annulus(ri, ro);
    pc.profile = PhantomComponent::Profile::RadialBump;
    spec.parts.push_back(pc);
    return rasterize(spec, n, 2);
}

// --- criterion 1: adjoint exactness --------------------------------------

void criterion_adjoint() {
    auto t0 = Clock::now();
    double worst = 0.0;
    for (uint64_t k = 0; k < 20; ++k) {
        GridField f = random_field(64, k);
        Sinogram g(128, 96);
        {
            std::mt19937_64 rng(1000 + k);
            std::uniform_real_distribution<double> uni(-1, 1);
            for (auto& v : g.v) v = uni(rng);
        }
        Sinogram Xf = xray_forward(f, 128, 96);
        GridField Xtg = xray_adjoint(g, 64);
        double lhs = 0.0, rhs = 0.0;
        for (size_t b = 0; b < g.v.size(); ++b) lhs += Xf.v[b] * g.v[b];
        lhs *= g.ds() * g.dtheta();
        for (size_t c = 0; c < f.v.size(); ++c) rhs += f.v[c] * Xtg.v[c];
        rhs *= f.h() * f.h();
        worst = std::max(worst, std::fabs(lhs - rhs) /
                                    std::max(std::fabs(lhs), std::fabs(rhs)));
    }
    double dt = seconds_since(t0);
    report(1, worst <= 1e-12 && dt < 10.0,
           "adjoint pairing, 20 random pairs at 64^2 (max rel dev %.2e, %.1fs)", worst, dt);
}

// --- criterion 2: normal operator vs convolution --------------------------

double normal_vs_convolution(int n) {
    GridField f = smooth_bump(n, 0.6);
    GridField Nf = normal_operator(f);
    RieszOrder ord{1.0, 2};
    GridField conv = riesz_potential(f, ord);
    for (auto& v : conv.v) v *= 2.0;
    return rel_l2_error(Nf, conv);
}

void criterion_normal_equivalence() {
    double e128 = normal_vs_convolution(128);
    double e256 = normal_vs_convolution(256);
    report(2, e256 <= 0.02 && e256 < e128,
           "X*Xf vs 2(f * |.|^{-1}) (rel err %.4f at 128^2, %.4f at 256^2)", e128, e256);
}

// --- criterion 3: inversion formula ---------------------------------------

void criterion_inversion() {
    auto t0 = Clock::now();
    GridField f256 = smooth_bump(256, 0.5);
    GridField g256 = invert_normal(normal_operator(f256));
    double e256 = rel_l2_error(g256, f256);

    GridField f512 = smooth_bump(512, 0.5);
    RieszOrder ord{1.0, 2};
    GridField Nf = riesz_potential(f512, ord);
    for (auto& v : Nf.v) v *= 2.0;
    GridField g512 = invert_normal(Nf);
    double e512 = rel_l2_error(g512, f512);
    double dt = seconds_since(t0);
    report(3, e256 <= 0.05 && e512 <= 0.03 && dt < 60.0,
           "f = c_2 (-Delta)^{1/2} Nf round trip (rel err %.4f at 256^2, %.4f at 512^2, %.1fs)",
           e256, e512, dt);
}

// --- criterion 4: exact polynomial generation ------------------------------

std::vector<std::vector<Rat>> rational_points(int d, int count) {
    std::vector<std::vector<Rat>> pts;
    for (int p = 0; p < count; ++p) {
        std::vector<Rat> x(d);
        for (int i = 0; i < d; ++i) {
            long num = 2 * p + 3 * i + 1;
            long den = p + i + 2;
            if ((p + i) % 2) num = -num;
            x[i] = Rat(num, den);
            x[i].canonicalize();
        }
        pts.push_back(std::move(x));
    }
    return pts;
}

bool lemma_exact(int d, const Rat& alpha, int degree) {
    check_lemma_hypothesis(alpha, d, degree);
    auto pts = rational_points(d, 20);
    std::vector<MultiIndex> gammas;
    std::function<void(MultiIndex&, int, int)> enumerate = [&](MultiIndex& g, int axis,
                                                               int rem) {
        if (axis == d) {
            gammas.push_back(g);
            return;
        }
        for (int k = 0; k <= rem; ++k) {
            g[axis] = k;
            enumerate(g, axis + 1, rem - k);
        }
    };
    MultiIndex g(d, 0);
    enumerate(g, 0, degree);
    for (const auto& gamma : gammas) {
        DerivExpansion e = expand_D(gamma, d);
        for (const auto& x : pts)
            if (eval_deriv_div_c(e, x, alpha) != eval_d_monomial_div_c(gamma, x)) return false;
    }
    return true;
}

bool rejected_set_matches(int d, int n) {
    for (long num = -21; num <= 7; ++num) {
        Rat alpha(num, 2);
        alpha.canonicalize();
        bool expect = false;
        for (int m = 1; m <= n; ++m)
            if (alpha == 2 - 2 * m) expect = true;
        for (int m = 2; m <= n; ++m)
            if (alpha == d - m) expect = true;
        bool rejected = false;
        try {
            check_lemma_hypothesis(alpha, d, n);
        } catch (const HypothesisViolation&) {
            rejected = true;
        }
        if (rejected != expect) return false;
    }
    return true;
}

void criterion_lemma() {
    struct Case {
        int d;
        Rat alpha;
    };
    std::vector<Case> cases = {{2, Rat(1)}, {2, Rat(1, 2)}, {3, Rat(2)}, {3, Rat(5, 2)}};
    bool all = true;
    for (const auto& c : cases) all = all && lemma_exact(c.d, c.alpha, 6);
    bool rej = rejected_set_matches(2, 6) && rejected_set_matches(3, 6);
    report(4, all && rej,
           "exact derivative-basis expansion, degree <= 6, 20 rational points "
           "(identities %s, rejected set %s)",
           all ? "exact" : "BROKEN", rej ? "exact" : "BROKEN");
}

// --- criterion 5: Abel coefficients ----------------------------------------

void criterion_abel() {
    bool table_ok = true, a0_ok = true, sum_ok = true, thresh_ok = true;
    AbelTable t = abel_coefficients(8, 40);
    for (int k = 0; k <= 8 && table_ok; ++k)
        for (int n = 0; n <= 40; ++n) {
            mpq_class oracle = abel_coefficients_oracle(k, n);
            if (oracle.get_den() != 1 || t.coeff(k, n) != oracle.get_num()) {
                table_ok = false;
                break;
            }
        }
    for (int n = 0; n <= 40; n += 2) {
        mpz_class df = double_factorial(n - 1);
        if (t.coeff(0, n) != df * df) a0_ok = false;
    }
    ChebTable cheb = chebyshev_coeffs(50);
    for (int k = 0; k <= 50; ++k) {
        mpz_class s = 0;
        for (int l = 0; l <= k; ++l) s += cheb.coeff(k, l);
        if (s != 1) sum_ok = false;
    }
    try {
        for (int k = 0; k <= 8; ++k) positivity_threshold(k, 200);
    } catch (const std::exception&) {
        thresh_ok = false;
    }
    report(5, table_ok && a0_ok && sum_ok && thresh_ok,
           "Abel tables (oracle %s, A_0 closed form %s, T_k(1)=1 %s, thresholds to n=200 %s)",
           table_ok ? "exact" : "BROKEN", a0_ok ? "exact" : "BROKEN",
           sum_ok ? "exact" : "BROKEN", thresh_ok ? "exist" : "MISSING");
}

// --- criterion 6: Fourier-mode consistency ---------------------------------

double mode_vs_abel(int k) {
    const int n = 256, n_theta = 512, n_s = 256;
    const double ri = 0.3, ro = 0.8;
    PhantomSpec spec;
    PhantomComponent pc;
    pc.region = RegionSpec::annulus(ri, ro);
    pc.profile = k == 0 ? PhantomComponent::Profile::RadialBump
                        : PhantomComponent::Profile::CosineMode;
    pc.mode_k = k;
    spec.parts.push_back(pc);
    GridField f = rasterize(spec, n, 2);
    Sinogram g = xray_forward(f, n_theta, n_s);
    auto mode = sinogram_angular_mode(g, k);
    auto radii = sinogram_mode_radii(g);

    // analytic radial profile of the phantom component
    auto a = [&](double r) {
        double mid = 0.5 * (ri + ro), half = 0.5 * (ro - ri);
        double rho = (r - mid) / half;
        if (rho * rho >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - rho * rho));
    };
    double scale = k == 0 ? 1.0 : 0.5;  // cos(k phi) = (e^{ik phi}+e^{-ik phi})/2
    double num = 0.0, den = 0.0;
    for (size_t j = 0; j < radii.size(); ++j) {
        if (radii[j] > 0.98) continue;
        double want = scale * abel_apply_at(k, a, radii[j]);
        double d = std::abs(mode[j] - std::complex<double>(want, 0.0));
        num += d * d;
        den += want * want;
    }
    return std::sqrt(num / den);
}

void criterion_modes() {
    double e0 = mode_vs_abel(0), e1 = mode_vs_abel(1), e3 = mode_vs_abel(3),
           e5 = mode_vs_abel(5);
    bool ok = e0 <= 0.01 && e1 <= 0.01 && e3 <= 0.01 && e5 <= 0.01;
    report(6, ok,
           "sinogram theta-modes vs generalized Abel transform "
           "(rel err k=0: %.4f, k=1: %.4f, k=3: %.4f, k=5: %.4f)",
           e0, e1, e3, e5);
}

// --- criteria 7/9: interior (ROI) problem ----------------------------------

MaskedProblem roi_problem(const GridField& truth, int n_theta, int n_s) {
    MaskedProblem p;
    p.n = truth.n;
    p.mask = lines_meeting_region(n_theta, n_s, RegionSpec::ball({0, 0, 0}, 0.2), truth.h());
    p.data = xray_forward_masked(truth, p.mask);
    p.support = region_mask(RegionSpec::annulus(0.5, 0.9), truth.n, 2);
    p.known_zero = region_mask(RegionSpec::ball({0, 0, 0}, 0.45), truth.n, 2);
    return p;
}

void criterion_roi() {
    auto t0 = Clock::now();
    GridField truth = annulus_bump(64, 0.5, 0.9);
    MaskedProblem p = roi_problem(truth, 512, 256);
    auto [x, rep] = cgls_solve(p, 2000, 1e-10, nullptr, &truth);
    // probe on the same geometry at 32^2, where iterating to numerical
    // convergence from all starts is affordable
    GridField truth32 = annulus_bump(32, 0.5, 0.9);
    MaskedProblem p32 = roi_problem(truth32, 256, 128);
    double dist = uniqueness_probe(p32, 5, 3000, 1e-10, 12345);
    double dt = seconds_since(t0);
    report(7, rep.rel_error <= 0.05 && dist <= 1e-3,
           "interior problem, lines through B(0,0.2) (rel err %.4f at 64^2, probe %.2e, %.0fs)",
           rep.rel_error, dist, dt);
}

void criterion_instability() {
    GridField truth = annulus_bump(32, 0.5, 0.9);
    MaskedProblem full;
    full.n = 32;
    full.mask = LineMask(128, 96);
    std::fill(full.mask.v.begin(), full.mask.v.end(), 1);
    full.data = xray_forward(truth, 128, 96);
    full.support = region_mask(RegionSpec::ball({0, 0, 0}, 1.0), 32, 2);
    full.known_zero = GridField(2, 32);
    auto sv_full = spectrum_report(full);

    MaskedProblem roi = full;
    roi.mask = lines_meeting_region(128, 96, RegionSpec::ball({0, 0, 0}, 0.2), truth.h());
    roi.data = xray_forward_masked(truth, roi.mask);
    auto sv_roi = spectrum_report(roi);

    double cond_full = sv_full.front() / sv_full.back();
    double cond_roi = sv_roi.back() > 0.0
                          ? sv_roi.front() / sv_roi.back()
                          : std::numeric_limits<double>::infinity();
    report(9, std::isfinite(cond_full) && cond_roi > cond_full,
           "ROI masking degrades conditioning (cond full %.3e, cond ROI %.3e)", cond_full,
           cond_roi);
}

// --- criterion 8: boundary-arc problem --------------------------------------

void criterion_arc() {
    auto t0 = Clock::now();
    PhantomSpec ph;
    PhantomComponent pc;
    pc.region = RegionSpec::ball({0.5, 0, 0}, 0.3);
    pc.profile = PhantomComponent::Profile::RadialBump;
    ph.parts.push_back(pc);
    auto [p, truth] = half_local_problem(RegionSpec::disc_segment(0.0, 0.4), ph, 64, 512, 256);
    auto [x, rep] = cgls_solve(p, 6000, 1e-10, nullptr, &truth);
    double dt = seconds_since(t0);
    report(8, rep.rel_error <= 0.08,
           "half-local arc problem, half-width 0.4 (rel err %.4f at 64^2, %.0fs)",
           rep.rel_error, dt);
}

// --- criterion 10: infinite-order vanishing + linearization -----------------

void criterion_vanishing() {
    GridField f = annulus_bump(64, 0.4, 0.8);
    RieszOrder ord{1.0, 2};
    auto derivs = potential_derivatives(f, ord, {0.0, 0.0}, 8);
    double worst_odd = 0.0;
    for (const auto& [beta, val] : derivs)
        if ((beta[0] + beta[1]) % 2 == 1) worst_odd = std::max(worst_odd, std::fabs(val));

    SplitScenario sc;
    auto mk = [](double v) {
        PhantomSpec s;
        PhantomComponent pc;
        pc.region = RegionSpec::annulus(0.5, 0.9);
        pc.profile = PhantomComponent::Profile::RadialBump;
        pc.value = v;
        s.parts.push_back(pc);
        return s;
    };
    sc.dc1 = mk(0.01);
    sc.dc2 = mk(0.03);
    double e1 = splitting_linearization_discrepancy(sc, 64, 0.02);
    double e2 = splitting_linearization_discrepancy(sc, 64, 0.01);
    double ratio = e1 / e2;
    report(10, worst_odd <= 1e-10 && ratio >= 3.5 && ratio <= 4.5,
           "odd derivatives of I_1 f vanish at 0 (max %.2e); linearization ratio %.3f",
           worst_odd, ratio);
}

}  // namespace

int main() {
    criterion_adjoint();
    criterion_normal_equivalence();
    criterion_inversion();
    criterion_lemma();
    criterion_abel();
    criterion_modes();
    criterion_roi();
    criterion_arc();
    criterion_instability();
    criterion_vanishing();
    if (g_failures == 0)
        std::printf("all 10 criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", g_failures);
    return g_failures;
}
