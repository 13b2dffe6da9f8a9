#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "xrt/grid.hpp"

namespace xrt {

inline constexpr double kOffsetSpan = 1.4142135623730951;  // sqrt(2)

// Parallel-beam data over oriented directions theta_j = 2*pi*j/n_theta and
// offsets s_i uniform in [-sqrt(2), sqrt(2)]. Bin (i, j) is the line
// { s_i * perp(theta_j) + t * dir(theta_j) : t in R }.
struct Sinogram {
    int n_theta = 0;
    int n_s = 0;
    std::vector<double> v;  // [j * n_s + i]

    Sinogram() = default;
    Sinogram(int nth, int ns);

    double dtheta() const { return 2.0 * M_PI / n_theta; }
    double ds() const { return 2.0 * kOffsetSpan / n_s; }
    double s(int i) const { return ((i + 0.5) - 0.5 * n_s) * ds(); }
    double theta(int j) const { return j * dtheta(); }

    double& at(int i, int j) { return v[static_cast<size_t>(j) * n_s + i]; }
    double at(int i, int j) const { return v[static_cast<size_t>(j) * n_s + i]; }
    void validate() const;
};

struct LineMask {
    int n_theta = 0;
    int n_s = 0;
    std::vector<uint8_t> v;

    LineMask() = default;
    LineMask(int nth, int ns) : n_theta(nth), n_s(ns), v(static_cast<size_t>(nth) * ns, 0) {}
    uint8_t& at(int i, int j) { return v[static_cast<size_t>(j) * n_s + i]; }
    uint8_t at(int i, int j) const { return v[static_cast<size_t>(j) * n_s + i]; }
    size_t count() const;
};

Sinogram xray_forward(const GridField& f, int n_theta, int n_s);

// Integral of f over the single line with offset s and direction theta,
// using the same sampling rule as xray_forward.
double line_integral(const GridField& f, double s, double theta);

// Forward transform restricted to masked bins (zero elsewhere); masked bins
// are bit-identical to the full xray_forward.
Sinogram xray_forward_masked(const GridField& f, const LineMask& mask);
GridField xray_adjoint(const Sinogram& g, int n);

// X* X with default sinogram shape n_theta = 2n, n_s = 3n/2.
GridField normal_operator(const GridField& f);
GridField normal_operator(const GridField& f, int n_theta, int n_s);

// Mask of bins whose line passes within h/2 of the region. Supported kinds:
// ball, annulus, boundary arc (line meets the arc of the unit circle).
LineMask lines_meeting_region(int n_theta, int n_s, const RegionSpec& region, double h);

// Angular Fourier mode k of the sinogram in the closest-point
// parametrization: lines indexed by the polar angle of their closest point
// to the origin. Returns the mode per positive offset s_i (i >= n_s/2).
std::vector<std::complex<double>> sinogram_angular_mode(const Sinogram& g, int k);
std::vector<double> sinogram_mode_radii(const Sinogram& g);

// 3D reduction: restrict a 3D field to the plane through the x3-axis at
// azimuth psi, returning a 2D field on the same resolution (trilinear).
GridField restrict_to_axial_plane(const GridField& f3, double psi);

}  // namespace xrt
