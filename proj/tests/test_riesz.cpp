#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "xrt/grid.hpp"
#include "xrt/riesz.hpp"

using namespace xrt;

namespace {

GridField smooth_bump(int n, double r = 0.5, double cx = 0.0, double cy = 0.0) {
    PhantomSpec spec;
    PhantomComponent pc;
    pc.region = RegionSpec::ball({cx, cy, 0}, r);
    pc.profile = PhantomComponent::Profile::RadialBump;
    spec.parts.push_back(pc);
    return rasterize(spec, n, 2);
}

}  // namespace

TEST_SUITE("riesz") {

TEST_CASE("order validation") {
    RieszOrder ok{1.0, 2};
    ok.validate();
    RieszOrder ok3{2.0, 3};
    ok3.validate();
    RieszOrder frac{0.5, 2};
    frac.validate();
    RieszOrder too_big{2.0, 2};
    CHECK_THROWS_AS(too_big.validate(), std::invalid_argument);
    RieszOrder bad_int{1.0, 3};  // integer but not d-1
    CHECK_THROWS_AS(bad_int.validate(), std::invalid_argument);
    RieszOrder neg{-0.5, 2};
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("kernel cell average matches the closed form for alpha=1, d=2") {
    // integral of 1/|x| over a square of side h is 4h ln(1+sqrt(2)),
    // so the cell average is 4 ln(1+sqrt(2)) / h
    for (double h : {0.125, 0.03125}) {
        double want = 4.0 * std::log(1.0 + std::sqrt(2.0)) / h;
        CHECK(kernel_cell_average(1.0, 2, h) == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("kernel cell average homogeneity") {
    // |x|^{-alpha} scales by 2^alpha when the cell shrinks by half
    double a = kernel_cell_average(0.7, 2, 0.1);
    double b = kernel_cell_average(0.7, 2, 0.05);
    CHECK(b / a == doctest::Approx(std::pow(2.0, 0.7)).epsilon(1e-10));
    double a3 = kernel_cell_average(1.3, 3, 0.1);
    double b3 = kernel_cell_average(1.3, 3, 0.05);
    CHECK(b3 / a3 == doctest::Approx(std::pow(2.0, 1.3)).epsilon(1e-10));
}

TEST_CASE("riesz potential of a point mass samples the kernel") {
    GridField f(2, 32);
    f.at(16, 16) = 1.0;
    RieszOrder ord{1.0, 2};
    GridField u = riesz_potential(f, ord);
    double h = f.h();
    // at displaced cells the potential is h^2 * |dx|^{-1}
    for (auto [di, dj] : {std::pair{3, 0}, {0, 5}, {4, 4}, {-7, 2}}) {
        double dist = h * std::sqrt(double(di * di + dj * dj));
        CHECK(u.at(16 + di, 16 + dj) == doctest::Approx(h * h / dist).epsilon(1e-12));
    }
    // center cell carries the exact cell average
    CHECK(u.at(16, 16) == doctest::Approx(h * h * kernel_cell_average(1.0, 2, h)).epsilon(1e-11));
}

TEST_CASE("riesz potential is linear and positive on positive input") {
    GridField f = smooth_bump(64);
    RieszOrder ord{1.0, 2};
    GridField u = riesz_potential(f, ord);
    GridField f2 = f;
    for (auto& v : f2.v) v *= 2.0;
    GridField u2 = riesz_potential(f2, ord);
    for (size_t c = 0; c < u.v.size(); ++c) {
        CHECK(u.v[c] > 0.0);
        CHECK(u2.v[c] == 2.0 * u.v[c]);  // exact under power-of-two scaling
    }
}

TEST_CASE("fractional laplacian with s=1 matches the 5-point stencil") {
    // the stencil has O(h^2) truncation error, so require agreement at a loose
    // tolerance plus second-order decay of the gap under refinement
    auto gap = [](int n) {
        GridField f = smooth_bump(n, 0.4);
        GridField lap = fractional_laplacian(f, 1.0);
        double h = f.h();
        double num = 0.0, den = 0.0;
        for (int j = 2; j < n - 2; ++j)
            for (int i = 2; i < n - 2; ++i) {
                double stencil = -(f.at(i + 1, j) + f.at(i - 1, j) + f.at(i, j + 1) +
                                   f.at(i, j - 1) - 4.0 * f.at(i, j)) /
                                 (h * h);
                double d = lap.at(i, j) - stencil;
                num += d * d;
                den += stencil * stencil;
            }
        return std::sqrt(num / den);
    };
    double e128 = gap(128), e256 = gap(256);
    CHECK(e128 <= 0.1);
    CHECK(e256 <= 0.35 * e128);  // roughly O(h^2)
}

TEST_CASE("fractional laplacian warns on non-decaying input") {
    GridField f(2, 32);
    for (auto& v : f.v) v = 1.0;
    std::string warning;
    fractional_laplacian(f, 0.5, &warning);
    CHECK(!warning.empty());
    warning.clear();
    fractional_laplacian(smooth_bump(32, 0.4), 0.5, &warning);
    CHECK(warning.empty());
}

TEST_CASE("half laplacian inverts the riesz potential on interior data") {
    // (-Delta)^{1/2} (f * |.|^{-1}) = 2 pi f in 2D
    GridField f = smooth_bump(128, 0.35);
    RieszOrder ord{1.0, 2};
    GridField u = riesz_potential(f, ord);
    std::string warning;
    GridField g = invert_normal(u, &warning);  // c_2 (-Delta)^{1/2} with c_2 = 1/(4 pi)
    // N f = 2 I_1 f, so inverting u = I_1 f returns f / 2
    GridField half = f;
    for (auto& v : half.v) v *= 0.5;
    CHECK(rel_l2_error(g, half) <= 0.05);
}

TEST_CASE("invert_normal is linear under power-of-two scaling") {
    GridField f = smooth_bump(64, 0.4);
    RieszOrder ord{1.0, 2};
    GridField Nf = riesz_potential(f, ord);
    for (auto& v : Nf.v) v *= 2.0;
    GridField a = invert_normal(Nf);
    for (auto& v : Nf.v) v *= 4.0;
    GridField b = invert_normal(Nf);
    for (size_t c = 0; c < a.v.size(); ++c) CHECK(b.v[c] == 4.0 * a.v[c]);
}

TEST_CASE("potential derivatives: clearance and symmetry") {
    // annulus phantom, evaluation at the origin
    PhantomSpec spec;
    PhantomComponent pc;
    pc.region = RegionSpec::annulus(0.4, 0.8);
    pc.profile = PhantomComponent::Profile::RadialBump;
    spec.parts.push_back(pc);
    GridField f = rasterize(spec, 64, 2);
    RieszOrder ord{1.0, 2};
    auto derivs = potential_derivatives(f, ord, {0.0, 0.0}, 4);
    bool saw_zero_beta = false;
    for (const auto& [beta, val] : derivs) {
        int order = beta[0] + beta[1];
        if (order == 0) {
            saw_zero_beta = true;
            // matches the convolution route at the center cell
            GridField u = riesz_potential(f, ord);
            CHECK(val == doctest::Approx(u.at(32, 32)).epsilon(1e-3));
        }
        if (order % 2 == 1) CHECK(std::fabs(val) <= 1e-12);
    }
    CHECK(saw_zero_beta);
    // phantom too close to x0 is rejected
    GridField close = smooth_bump(64, 0.3);
    CHECK_THROWS_AS(potential_derivatives(close, ord, {0.0, 0.0}, 2), std::invalid_argument);
}

}  // TEST_SUITE
