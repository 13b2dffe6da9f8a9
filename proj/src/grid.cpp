#include "xrt/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace xrt {

GridField::GridField(int dim_, int n_) : dim(dim_), n(n_) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("GridField: dim must be 2 or 3");
    if (n <= 0) throw std::invalid_argument("GridField: n must be positive");
    size_t len = 1;
    for (int k = 0; k < dim; ++k) len *= static_cast<size_t>(n);
    v.assign(len, 0.0);
}

void GridField::validate() const {
    size_t len = 1;
    for (int k = 0; k < dim; ++k) len *= static_cast<size_t>(n);
    if (v.size() != len) throw std::invalid_argument("GridField: length(values) != n^dim");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("GridField: non-finite value");
}

double GridField::l2() const {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double rel_l2_error(const GridField& a, const GridField& ref) {
    if (a.v.size() != ref.v.size()) throw std::invalid_argument("rel_l2_error: size mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) {
        double d = a.v[i] - ref.v[i];
        num += d * d;
        den += ref.v[i] * ref.v[i];
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

RegionSpec RegionSpec::ball(std::array<double, 3> c, double r) {
    RegionSpec s;
    s.kind = Kind::Ball;
    s.center = c;
    s.radius = r;
    s.validate();
    return s;
}

RegionSpec RegionSpec::annulus(double r_in, double r_out) {
    RegionSpec s;
    s.kind = Kind::Annulus;
    s.r_inner = r_in;
    s.r_outer = r_out;
    s.validate();
    return s;
}

RegionSpec RegionSpec::disc_segment(double center_angle, double half_width) {
    RegionSpec s;
    s.kind = Kind::Arc;
    s.arc_center_angle = center_angle;
    s.arc_half_width = half_width;
    s.validate();
    return s;
}

void RegionSpec::validate() const {
    switch (kind) {
        case Kind::Ball:
            if (!(radius > 0.0)) throw std::invalid_argument("RegionSpec: ball radius must be > 0");
            break;
        case Kind::Annulus:
            if (!(0.0 < r_inner && r_inner < r_outer))
                throw std::invalid_argument("RegionSpec: need 0 < r_inner < r_outer");
            break;
        case Kind::Arc:
            if (!(arc_half_width > 0.0 && arc_half_width <= M_PI))
                throw std::invalid_argument("RegionSpec: need 0 < arc_half_width <= pi");
            break;
    }
}

bool RegionSpec::contains(const double* x, int dim) const {
    double r2 = 0.0;
    for (int k = 0; k < dim; ++k) r2 += x[k] * x[k];
    switch (kind) {
        case Kind::Ball: {
            double d2 = 0.0;
            for (int k = 0; k < dim; ++k) {
                double t = x[k] - center[k];
                d2 += t * t;
            }
            return d2 <= radius * radius;
        }
        case Kind::Annulus:
            return r2 >= r_inner * r_inner && r2 <= r_outer * r_outer;
        case Kind::Arc: {
            // filled circular segment: inside the unit disc and on the arc
            // side of the chord
            if (dim != 2) throw std::invalid_argument("RegionSpec: arc regions are 2D only");
            if (r2 > 1.0) return false;
            double ux = std::cos(arc_center_angle), uy = std::sin(arc_center_angle);
            return x[0] * ux + x[1] * uy >= std::cos(arc_half_width);
        }
    }
    return false;
}

namespace {

// smooth bump in [0,1), value 1 at rho=0, C^inf decay to 0 at rho=1
double bump(double rho2) {
    if (rho2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - rho2));
}

// normalized radial coordinate of x within the region's radial support
double region_rho2(const RegionSpec& reg, const double* x, int dim) {
    switch (reg.kind) {
        case RegionSpec::Kind::Ball: {
            double d2 = 0.0;
            for (int k = 0; k < dim; ++k) {
                double t = x[k] - reg.center[k];
                d2 += t * t;
            }
            return d2 / (reg.radius * reg.radius);
        }
        case RegionSpec::Kind::Annulus: {
            double r = 0.0;
            for (int k = 0; k < dim; ++k) r += x[k] * x[k];
            r = std::sqrt(r);
            double mid = 0.5 * (reg.r_inner + reg.r_outer);
            double half = 0.5 * (reg.r_outer - reg.r_inner);
            double rho = (r - mid) / half;
            return rho * rho;
        }
        case RegionSpec::Kind::Arc: {
            double d2 = x[0] * x[0] + x[1] * x[1];
            return d2;  // fall back to distance from origin
        }
    }
    return 1.0;
}

double profile_value(const PhantomComponent& p, const double* x, int dim) {
    if (!p.region.contains(x, dim)) return 0.0;
    switch (p.profile) {
        case PhantomComponent::Profile::Constant:
            return p.value;
        case PhantomComponent::Profile::RadialBump:
            return p.value * bump(region_rho2(p.region, x, dim));
        case PhantomComponent::Profile::CosineMode: {
            if (dim != 2)
                throw std::invalid_argument("PhantomSpec: cosine_mode is 2D only");
            double phi = std::atan2(x[1], x[0]);
            return p.value * std::cos(p.mode_k * phi) * bump(region_rho2(p.region, x, dim));
        }
    }
    return 0.0;
}

void check_raster_args(int n, int dim) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("rasterize: dim must be 2 or 3");
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("rasterize: n must be even and >= 8");
}

}  // namespace

GridField rasterize(const PhantomSpec& spec, int n, int dim) {
    check_raster_args(n, dim);
    for (const auto& p : spec.parts) p.region.validate();
    GridField f(dim, n);
    if (dim == 2) {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double x[2] = {f.center(ix), f.center(iy)};
                double s = 0.0;
                for (const auto& p : spec.parts) s += profile_value(p, x, 2);
                f.at(ix, iy) = s;
            }
    } else {
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    double x[3] = {f.center(ix), f.center(iy), f.center(iz)};
                    double s = 0.0;
                    for (const auto& p : spec.parts) s += profile_value(p, x, 3);
                    f.at(ix, iy, iz) = s;
                }
    }
    return f;
}

GridField region_mask(const RegionSpec& spec, int n, int dim) {
    check_raster_args(n, dim);
    spec.validate();
    GridField f(dim, n);
    if (dim == 2) {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double x[2] = {f.center(ix), f.center(iy)};
                f.at(ix, iy) = spec.contains(x, 2) ? 1.0 : 0.0;
            }
    } else {
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    double x[3] = {f.center(ix), f.center(iy), f.center(iz)};
                    f.at(ix, iy, iz) = spec.contains(x, 3) ? 1.0 : 0.0;
                }
    }
    return f;
}

RegionSpec convex_hull_of_arc(const RegionSpec& arc) {
    if (arc.kind != RegionSpec::Kind::Arc)
        throw std::invalid_argument("convex_hull_of_arc: expected a disc_segment arc");
    arc.validate();
    if (!(arc.arc_half_width < M_PI / 2))
        throw std::invalid_argument("convex_hull_of_arc: arc half-width must be < pi/2");
    // the filled segment is exactly the convex hull of the arc
    return arc;
}

}  // namespace xrt
