#include "xrt/xray.hpp"

#include <cmath>
#include <stdexcept>

#include "xrt/threading.hpp"

namespace xrt {

Sinogram::Sinogram(int nth, int ns) : n_theta(nth), n_s(ns) {
    if (nth <= 0 || nth % 2 != 0)
        throw std::invalid_argument("Sinogram: n_theta must be positive and even");
    if (ns <= 0) throw std::invalid_argument("Sinogram: n_s must be positive");
    v.assign(static_cast<size_t>(nth) * ns, 0.0);
}

void Sinogram::validate() const {
    if (n_theta % 2 != 0) throw std::invalid_argument("Sinogram: n_theta must be even");
    if (v.size() != static_cast<size_t>(n_theta) * n_s)
        throw std::invalid_argument("Sinogram: bad value array size");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("Sinogram: non-finite value");
}

size_t LineMask::count() const {
    size_t c = 0;
    for (uint8_t b : v) c += b;
    return c;
}

namespace {

// Walk the line {s*perp + t*dir} with fixed step h/2, t in [-K, K]*h/2,
// reporting the bilinear interpolation stencil at each sample point.
// Sample weights sum to 1 per point; callers apply the h/2 step weight.
template <class F>
void trace_line(int n, double s, double theta, F&& per_cell) {
    const double h = 2.0 / n;
    const double step = 0.5 * h;
    const int K = static_cast<int>(std::ceil(kOffsetSpan * n));
    const double dx = std::cos(theta), dy = std::sin(theta);
    const double px = -s * dy, py = s * dx;  // closest point to origin
    const double inv_h = 1.0 / h;
    for (int k = -K; k <= K; ++k) {
        double t = k * step;
        double x = px + t * dx;
        double y = py + t * dy;
        double u = (x + 1.0) * inv_h - 0.5;
        double w = (y + 1.0) * inv_h - 0.5;
        int i0 = static_cast<int>(std::floor(u));
        int j0 = static_cast<int>(std::floor(w));
        if (i0 < -1 || i0 >= n || j0 < -1 || j0 >= n) continue;
        double fu = u - i0, fw = w - j0;
        if (i0 >= 0 && j0 >= 0) per_cell(static_cast<size_t>(j0) * n + i0, (1 - fu) * (1 - fw));
        if (i0 + 1 < n && j0 >= 0) per_cell(static_cast<size_t>(j0) * n + i0 + 1, fu * (1 - fw));
        if (i0 >= 0 && j0 + 1 < n) per_cell(static_cast<size_t>(j0 + 1) * n + i0, (1 - fu) * fw);
        if (i0 + 1 < n && j0 + 1 < n)
            per_cell(static_cast<size_t>(j0 + 1) * n + i0 + 1, fu * fw);
    }
}

}  // namespace

Sinogram xray_forward(const GridField& f, int n_theta, int n_s) {
    if (f.dim != 2) throw std::invalid_argument("xray_forward: 2D fields only");
    f.validate();
    Sinogram g(n_theta, n_s);
    const int n = f.n;
    const double step = 0.5 * f.h();
    const int half = n_theta / 2;
    // compute directions [0, pi); fill [pi, 2*pi) by the oriented-line
    // symmetry Xf(s, theta) = Xf(-s, theta + pi), bit-exactly
    parallel_chunks(half, [&](int j) {
        double theta = g.theta(j);
        for (int i = 0; i < n_s; ++i) {
            double acc = 0.0;
            trace_line(n, g.s(i), theta, [&](size_t c, double w) { acc += w * f.v[c]; });
            g.at(i, j) = acc * step;
        }
    });
    for (int j = 0; j < half; ++j)
        for (int i = 0; i < n_s; ++i) g.at(i, j + half) = g.at(n_s - 1 - i, j);
    return g;
}

double line_integral(const GridField& f, double s, double theta) {
    if (f.dim != 2) throw std::invalid_argument("line_integral: 2D fields only");
    double acc = 0.0;
    trace_line(f.n, s, theta, [&](size_t c, double w) { acc += w * f.v[c]; });
    return acc * 0.5 * f.h();
}

GridField xray_adjoint(const Sinogram& g, int n) {
    g.validate();
    GridField out(2, n);
    const double h = out.h();
    const double step = 0.5 * h;
    const double scale = g.ds() * g.dtheta() / (h * h);
    const int half = g.n_theta / 2;
    // exact transpose of xray_forward: the mirrored half contributes through
    // its canonical bin. Fixed slab decomposition keeps splatting
    // deterministic under any thread count.
    const int n_slabs = 16;
    std::vector<std::vector<double>> slab(n_slabs);
    parallel_chunks(n_slabs, [&](int sl) {
        slab[sl].assign(out.v.size(), 0.0);
        double* img = slab[sl].data();
        int j0 = static_cast<int>(static_cast<long>(half) * sl / n_slabs);
        int j1 = static_cast<int>(static_cast<long>(half) * (sl + 1) / n_slabs);
        for (int j = j0; j < j1; ++j) {
            double theta = g.theta(j);
            for (int i = 0; i < g.n_s; ++i) {
                double val = (g.at(i, j) + g.at(g.n_s - 1 - i, j + half)) * step * scale;
                if (val == 0.0) continue;
                trace_line(n, g.s(i), theta, [&](size_t c, double w) { img[c] += w * val; });
            }
        }
    });
    for (int sl = 0; sl < n_slabs; ++sl)
        for (size_t c = 0; c < out.v.size(); ++c) out.v[c] += slab[sl][c];
    return out;
}

Sinogram xray_forward_masked(const GridField& f, const LineMask& mask) {
    if (f.dim != 2) throw std::invalid_argument("xray_forward_masked: 2D fields only");
    f.validate();
    Sinogram g(mask.n_theta, mask.n_s);
    const int n = f.n;
    const double step = 0.5 * f.h();
    const int half = mask.n_theta / 2;
    const int n_s = mask.n_s;
    // canonical lines (j < half) needed by any masked bin
    std::vector<std::pair<int, int>> lines;
    for (int j = 0; j < half; ++j)
        for (int i = 0; i < n_s; ++i)
            if (mask.at(i, j) || mask.at(n_s - 1 - i, j + half)) lines.emplace_back(i, j);
    const int n_chunks = 16;
    parallel_chunks(n_chunks, [&](int ch) {
        size_t b0 = lines.size() * ch / n_chunks;
        size_t b1 = lines.size() * (ch + 1) / n_chunks;
        for (size_t b = b0; b < b1; ++b) {
            auto [i, j] = lines[b];
            double acc = 0.0;
            trace_line(n, g.s(i), g.theta(j), [&](size_t c, double w) { acc += w * f.v[c]; });
            acc *= step;
            if (mask.at(i, j)) g.at(i, j) = acc;
            if (mask.at(n_s - 1 - i, j + half)) g.at(n_s - 1 - i, j + half) = acc;
        }
    });
    return g;
}

GridField normal_operator(const GridField& f) {
    int ns = (3 * f.n) / 2;
    if (ns % 2 != 0) ++ns;
    return normal_operator(f, 2 * f.n, ns);
}

GridField normal_operator(const GridField& f, int n_theta, int n_s) {
    return xray_adjoint(xray_forward(f, n_theta, n_s), f.n);
}

namespace {

// range of cos(psi) for psi in [a, b]
void cos_range(double a, double b, double& lo, double& hi) {
    double ca = std::cos(a), cb = std::cos(b);
    lo = std::min(ca, cb);
    hi = std::max(ca, cb);
    // interior extrema at multiples of pi
    double k0 = std::ceil(a / M_PI);
    for (double k = k0; k * M_PI <= b; k += 1.0) {
        double c = (std::fmod(k, 2.0) == 0.0) ? 1.0 : -1.0;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
}

}  // namespace

LineMask lines_meeting_region(int n_theta, int n_s, const RegionSpec& region, double h) {
    region.validate();
    Sinogram shape(n_theta, n_s);  // for bin geometry
    LineMask m(n_theta, n_s);
    const double tol = 0.5 * h;
    for (int j = 0; j < n_theta; ++j) {
        double theta = shape.theta(j);
        double perpx = -std::sin(theta), perpy = std::cos(theta);
        for (int i = 0; i < n_s; ++i) {
            double s = shape.s(i);
            double dist;
            switch (region.kind) {
                case RegionSpec::Kind::Ball: {
                    double proj = region.center[0] * perpx + region.center[1] * perpy;
                    dist = std::max(0.0, std::fabs(proj - s) - region.radius);
                    break;
                }
                case RegionSpec::Kind::Annulus:
                    dist = std::max(0.0, std::fabs(s) - region.r_outer);
                    break;
                case RegionSpec::Kind::Arc: {
                    // distance from the line to the boundary arc: the signed
                    // offset of arc point at angle phi is cos(phi - theta_p),
                    // theta_p the polar angle of perp
                    double theta_p = std::atan2(perpy, perpx);
                    double a = region.arc_center_angle - region.arc_half_width - theta_p;
                    double b = region.arc_center_angle + region.arc_half_width - theta_p;
                    double lo, hi;
                    cos_range(a, b, lo, hi);
                    if (s >= lo && s <= hi)
                        dist = 0.0;
                    else
                        dist = std::min(std::fabs(s - lo), std::fabs(s - hi));
                    break;
                }
                default:
                    throw std::invalid_argument("lines_meeting_region: unsupported region kind");
            }
            m.at(i, j) = dist <= tol ? 1 : 0;
        }
    }
    return m;
}

std::vector<double> sinogram_mode_radii(const Sinogram& g) {
    std::vector<double> r;
    for (int i = g.n_s / 2; i < g.n_s; ++i) r.push_back(g.s(i));
    return r;
}

std::vector<std::complex<double>> sinogram_angular_mode(const Sinogram& g, int k) {
    // positive offsets only; closest point of bin (i, j) has polar angle
    // theta_j + pi/2 and radius s_i
    std::vector<std::complex<double>> mode;
    for (int i = g.n_s / 2; i < g.n_s; ++i) {
        std::complex<double> acc{0.0, 0.0};
        for (int j = 0; j < g.n_theta; ++j) {
            double phi = g.theta(j) + M_PI / 2;
            acc += g.at(i, j) * std::polar(1.0, -k * phi);
        }
        mode.push_back(acc / static_cast<double>(g.n_theta));
    }
    return mode;
}

GridField restrict_to_axial_plane(const GridField& f3, double psi) {
    if (f3.dim != 3) throw std::invalid_argument("restrict_to_axial_plane: 3D field expected");
    const int n = f3.n;
    GridField out(2, n);
    const double cx = std::cos(psi), sy = std::sin(psi);
    const double inv_h = 1.0 / f3.h();
    auto sample3 = [&](double x, double y, double z) {
        double u = (x + 1.0) * inv_h - 0.5;
        double v = (y + 1.0) * inv_h - 0.5;
        double w = (z + 1.0) * inv_h - 0.5;
        int i0 = static_cast<int>(std::floor(u));
        int j0 = static_cast<int>(std::floor(v));
        int k0 = static_cast<int>(std::floor(w));
        double fu = u - i0, fv = v - j0, fw = w - k0;
        double acc = 0.0;
        for (int dk = 0; dk < 2; ++dk)
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di) {
                    int i = i0 + di, j = j0 + dj, kk = k0 + dk;
                    if (i < 0 || i >= n || j < 0 || j >= n || kk < 0 || kk >= n) continue;
                    double wt = (di ? fu : 1 - fu) * (dj ? fv : 1 - fv) * (dk ? fw : 1 - fw);
                    acc += wt * f3.at(i, j, kk);
                }
        return acc;
    };
    for (int iw = 0; iw < n; ++iw)
        for (int iu = 0; iu < n; ++iu) {
            double u = out.center(iu), w = out.center(iw);
            out.at(iu, iw) = sample3(u * cx, u * sy, w);
        }
    return out;
}

}  // namespace xrt
