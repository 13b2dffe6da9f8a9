#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace xrt {

// Scalar field sampled cell-centered on a uniform grid over [-1,1]^dim.
struct GridField {
    int dim = 2;
    int n = 0;
    std::vector<double> v;  // row-major, length n^dim

    GridField() = default;
    GridField(int dim_, int n_);

    double h() const { return 2.0 / n; }
    // coordinate of cell center along one axis
    double center(int idx) const { return -1.0 + (idx + 0.5) * h(); }

    double& at(int ix, int iy) { return v[static_cast<size_t>(iy) * n + ix]; }
    double at(int ix, int iy) const { return v[static_cast<size_t>(iy) * n + ix]; }
    double& at(int ix, int iy, int iz) {
        return v[(static_cast<size_t>(iz) * n + iy) * n + ix];
    }
    double at(int ix, int iy, int iz) const {
        return v[(static_cast<size_t>(iz) * n + iy) * n + ix];
    }

    size_t size() const { return v.size(); }
    void validate() const;  // throws on invariant violation

    double l2() const;
    double max_abs() const;
};

double rel_l2_error(const GridField& a, const GridField& ref);

// Geometric regions in domain units. `Arc` denotes an arc of the unit
// circle centered at angle arc_center_angle with half-width arc_half_width;
// rasterized as a region it is the filled circular segment bounded by the
// chord between the arc endpoints and the arc itself.
struct RegionSpec {
    enum class Kind { Ball, Annulus, Arc };
    Kind kind = Kind::Ball;

    std::array<double, 3> center{0.0, 0.0, 0.0};
    double radius = 0.0;                        // Ball
    double r_inner = 0.0, r_outer = 0.0;        // Annulus (centered at origin)
    double arc_center_angle = 0.0;              // Arc
    double arc_half_width = 0.0;

    static RegionSpec ball(std::array<double, 3> c, double r);
    static RegionSpec annulus(double r_in, double r_out);
    static RegionSpec disc_segment(double center_angle, double half_width);

    void validate() const;
    bool contains(const double* x, int dim) const;
};

struct PhantomComponent {
    enum class Profile { Constant, RadialBump, CosineMode };
    RegionSpec region;
    Profile profile = Profile::Constant;
    double value = 1.0;  // constant value or bump amplitude
    int mode_k = 0;      // CosineMode only
};

struct PhantomSpec {
    std::vector<PhantomComponent> parts;
};

GridField rasterize(const PhantomSpec& spec, int n, int dim);
GridField region_mask(const RegionSpec& spec, int n, int dim);

// Convex hull of a boundary arc of the unit circle: the circular segment
// between the chord joining the arc endpoints and the arc. Requires
// half-width < pi/2.
RegionSpec convex_hull_of_arc(const RegionSpec& arc);

}  // namespace xrt
