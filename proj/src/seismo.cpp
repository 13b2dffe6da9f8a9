#include "xrt/seismo.hpp"

#include <cmath>
#include <stdexcept>

namespace xrt {

namespace {

GridField background_speed(const SplitScenario& sc, int n) {
    GridField c0(2, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double x = c0.center(i), y = c0.center(j);
            c0.at(i, j) = sc.c0_base + sc.c0_slope * std::sqrt(x * x + y * y);
        }
    for (double v : c0.v)
        if (!(v > 0.0)) throw std::invalid_argument("SplitScenario: c0 must be positive");
    return c0;
}

}  // namespace

std::string SplitScenario::validate(int n) const {
    if (!(0.0 < r_inner && r_inner < r_outer))
        throw std::invalid_argument("SplitScenario: need 0 < r_inner < r_outer");
    if (!(data_ball_r > 0.0) || !(known_zero_r > 0.0) || known_zero_r >= r_inner)
        throw std::invalid_argument("SplitScenario: need 0 < known_zero_r < r_inner");
    GridField c0 = background_speed(*this, n);
    double cmin = c0.v[0];
    for (double v : c0.v) cmin = std::min(cmin, v);
    GridField d1 = rasterize(dc1, n, 2), d2 = rasterize(dc2, n, 2);
    RegionSpec ann = RegionSpec::annulus(r_inner, r_outer);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double x[2] = {c0.center(i), c0.center(j)};
            if ((d1.at(i, j) != 0.0 || d2.at(i, j) != 0.0) && !ann.contains(x, 2))
                throw std::invalid_argument("SplitScenario: perturbations must live in the annulus");
        }
    double dmax = std::max(d1.max_abs(), d2.max_abs());
    if (dmax > 0.05 * cmin)
        return "linearization regime violated: max |dc| = " + std::to_string(dmax) +
               " exceeds 0.05 * min c0 = " + std::to_string(0.05 * cmin);
    return "";
}

Sinogram synthesize_splitting(const SplitScenario& sc, int n, int n_theta, int n_s,
                              std::string* warning) {
    std::string w = sc.validate(n);
    if (!w.empty() && warning) *warning = w;
    GridField c0 = background_speed(sc, n);
    GridField d1 = rasterize(sc.dc1, n, 2), d2 = rasterize(sc.dc2, n, 2);
    GridField g(2, n);
    for (size_t c = 0; c < g.v.size(); ++c)
        g.v[c] = (d2.v[c] - d1.v[c]) / (c0.v[c] * c0.v[c]);
    Sinogram data = xray_forward(g, n_theta, n_s);
    LineMask m = lines_meeting_region(n_theta, n_s,
                                      RegionSpec::ball({0.0, 0.0, 0.0}, sc.data_ball_r), g.h());
    for (size_t b = 0; b < data.v.size(); ++b)
        if (!m.v[b]) data.v[b] = 0.0;
    return data;
}

GridField recover_difference(const Sinogram& data, const SplitScenario& sc, int n, int max_iter,
                             double tol, ReconReport* report) {
    MaskedProblem p;
    p.n = n;
    p.data = data;
    p.mask = lines_meeting_region(data.n_theta, data.n_s,
                                  RegionSpec::ball({0.0, 0.0, 0.0}, sc.data_ball_r), 2.0 / n);
    p.support = region_mask(RegionSpec::annulus(sc.r_inner, sc.r_outer), n, 2);
    p.known_zero = region_mask(RegionSpec::ball({0.0, 0.0, 0.0}, sc.known_zero_r), n, 2);
    auto [x, rep] = cgls_solve(p, max_iter, tol);
    if (report) *report = rep;
    GridField c0 = background_speed(sc, n);
    for (size_t c = 0; c < x.v.size(); ++c) x.v[c] *= c0.v[c] * c0.v[c];
    return x;
}

std::pair<MaskedProblem, GridField> half_local_problem(const RegionSpec& arc,
                                                       const PhantomSpec& phantom, int n,
                                                       int n_theta, int n_s) {
    if (arc.kind != RegionSpec::Kind::Arc)
        throw std::invalid_argument("half_local_problem: arc region expected");
    GridField truth = rasterize(phantom, n, 2);
    MaskedProblem p;
    p.n = n;
    p.mask = lines_meeting_region(n_theta, n_s, arc, truth.h());
    Sinogram data = xray_forward(truth, n_theta, n_s);
    for (size_t b = 0; b < data.v.size(); ++b)
        if (!p.mask.v[b]) data.v[b] = 0.0;
    p.data = std::move(data);
    // hull of the arc vanishes as a usable zero set once the arc exceeds a
    // half-circle; fall back to no known-zero constraint
    if (arc.arc_half_width < M_PI / 2) {
        p.known_zero =
            region_mask(helgason_step(RegionSpec::ball({0.0, 0.0, 0.0}, 1.0), arc), n, 2);
    } else {
        p.known_zero = GridField(2, n);
    }
    p.support = region_mask(RegionSpec::ball({0.0, 0.0, 0.0}, 1.0), n, 2);
    for (size_t c = 0; c < p.support.v.size(); ++c)
        if (p.known_zero.v[c] > 0.5) p.support.v[c] = 0.0;
    p.validate();
    return {std::move(p), std::move(truth)};
}

double splitting_linearization_discrepancy(const SplitScenario& sc, int n, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("discrepancy: eps > 0");
    GridField c0 = background_speed(sc, n);
    GridField d1 = rasterize(sc.dc1, n, 2), d2 = rasterize(sc.dc2, n, 2);
    GridField exact(2, n), lin(2, n);
    for (size_t c = 0; c < c0.v.size(); ++c) {
        double c1 = c0.v[c] + eps * d1.v[c];
        double c2 = c0.v[c] + eps * d2.v[c];
        if (!(c1 > 0.0) || !(c2 > 0.0))
            throw std::invalid_argument("discrepancy: perturbed speed not positive");
        exact.v[c] = 1.0 / c1 - 1.0 / c2;
        lin.v[c] = eps * (d2.v[c] - d1.v[c]) / (c0.v[c] * c0.v[c]);
    }
    const int n_theta = 64, n_s = n;
    Sinogram shape(n_theta, n_s);
    LineMask m = lines_meeting_region(n_theta, n_s,
                                      RegionSpec::ball({0.0, 0.0, 0.0}, sc.data_ball_r), c0.h());
    double worst = 0.0;
    for (int j = 0; j < n_theta / 2; ++j)
        for (int i = 0; i < n_s; ++i) {
            if (!m.at(i, j)) continue;
            double te = line_integral(exact, shape.s(i), shape.theta(j));
            double tl = line_integral(lin, shape.s(i), shape.theta(j));
            worst = std::max(worst, std::abs(te - tl));
        }
    return worst;
}

}  // namespace xrt
