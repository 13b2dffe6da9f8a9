#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "xrt/recon.hpp"

using namespace xrt;

namespace {

GridField bump_field(int n, double r, double cx = 0.0) {
    PhantomSpec spec;
    PhantomComponent pc;
    pc.region = RegionSpec::ball({cx, 0, 0}, r);
    pc.profile = PhantomComponent::Profile::RadialBump;
    spec.parts.push_back(pc);
    return rasterize(spec, n, 2);
}

LineMask full_mask(int nth, int ns) {
    LineMask m(nth, ns);
    std::fill(m.v.begin(), m.v.end(), 1);
    return m;
}

MaskedProblem full_problem(const GridField& truth, int nth, int ns) {
    MaskedProblem p;
    p.n = truth.n;
    p.mask = full_mask(nth, ns);
    p.data = xray_forward(truth, nth, ns);
    p.support = region_mask(RegionSpec::ball({0, 0, 0}, 1.0), truth.n, 2);
    p.known_zero = GridField(2, truth.n);
    return p;
}

}  // namespace

TEST_SUITE("recon") {

TEST_CASE("problem validation") {
    GridField truth = bump_field(16, 0.5);
    MaskedProblem p = full_problem(truth, 32, 24);
    p.validate();
    // overlapping support and known_zero is rejected
    p.known_zero = region_mask(RegionSpec::ball({0, 0, 0}, 0.3), 16, 2);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.known_zero = GridField(2, 16);
    p.mask = LineMask(32, 20);  // shape mismatch
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("full-data cgls recovers a smooth phantom") {
    GridField truth = bump_field(16, 0.5);
    MaskedProblem p = full_problem(truth, 64, 48);
    auto [x, rep] = cgls_solve(p, 300, 1e-12, nullptr, &truth);
    CHECK(rep.rel_error <= 0.02);
    CHECK(rep.rel_residual <= 1e-6);
    CHECK(rep.iterations > 0);
    CHECK(rep.sigma_max_est > rep.sigma_min_est);
    // residual history is monotone non-increasing
    for (size_t i = 1; i < rep.residual_history.size(); ++i)
        CHECK(rep.residual_history[i] <= rep.residual_history[i - 1] * (1.0 + 1e-10));
}

TEST_CASE("constraints are enforced on the iterates") {
    GridField truth = bump_field(16, 0.25, 0.4);
    MaskedProblem p = full_problem(truth, 64, 48);
    p.support = region_mask(RegionSpec::ball({0.4, 0, 0}, 0.3), 16, 2);
    p.known_zero = region_mask(RegionSpec::ball({-0.5, 0, 0}, 0.2), 16, 2);
    GridField start(2, 16);
    for (auto& v : start.v) v = 1.0;  // infeasible start gets projected
    auto [x, rep] = cgls_solve(p, 100, 1e-10, &start);
    for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i) {
            if (p.support.at(i, j) < 0.5) CHECK(x.at(i, j) == 0.0);
            if (p.known_zero.at(i, j) > 0.5) CHECK(x.at(i, j) == 0.0);
        }
}

TEST_CASE("cgls input checking") {
    GridField truth = bump_field(16, 0.5);
    MaskedProblem p = full_problem(truth, 32, 24);
    CHECK_THROWS_AS(cgls_solve(p, 0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(cgls_solve(p, 10, 0.0), std::invalid_argument);
    p.mask = LineMask(32, 24);  // empty mask
    CHECK_THROWS_AS(cgls_solve(p, 10, 1e-10), std::invalid_argument);
}

TEST_CASE("uniqueness probe separates informative from empty data") {
    GridField truth = bump_field(16, 0.4);
    MaskedProblem p = full_problem(truth, 64, 48);
    double d_full = uniqueness_probe(p, 3, 200, 1e-12, 7);
    CHECK(d_full <= 1e-3);
    // keep only lines that miss the support entirely: no information
    Sinogram shape(64, 48);
    LineMask far(64, 48);
    for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 48; ++i) far.at(i, j) = std::fabs(shape.s(i)) > 1.2;
    REQUIRE(far.count() > 0);
    MaskedProblem q = p;
    q.mask = far;
    q.data = xray_forward_masked(truth, far);
    double d_empty = uniqueness_probe(q, 3, 50, 1e-12, 7);
    CHECK(d_empty > 0.5);
}

TEST_CASE("spectrum: masking can only shrink singular values") {
    GridField truth = bump_field(16, 0.5);
    MaskedProblem p = full_problem(truth, 32, 24);
    p.support = region_mask(RegionSpec::annulus(0.5, 0.9), 16, 2);
    auto sv_full = spectrum_report(p);
    MaskedProblem q = p;
    q.mask = lines_meeting_region(32, 24, RegionSpec::ball({0, 0, 0}, 0.25), 2.0 / 16);
    q.data = xray_forward_masked(truth, q.mask);
    auto sv_roi = spectrum_report(q);
    REQUIRE(sv_full.size() == sv_roi.size());
    CHECK(sv_roi.front() <= sv_full.front() * (1 + 1e-12));
    CHECK(sv_roi.back() <= sv_full.back() * (1 + 1e-12));
    // size guard
    MaskedProblem big = full_problem(bump_field(64, 0.5), 32, 24);
    CHECK_THROWS_AS(spectrum_report(big), std::invalid_argument);
}

TEST_CASE("helgason step returns the hull of the arc") {
    RegionSpec arc = RegionSpec::disc_segment(0.3, 0.4);
    RegionSpec hull = helgason_step(RegionSpec::ball({0, 0, 0}, 1.0), arc);
    RegionSpec want = convex_hull_of_arc(arc);
    CHECK(hull.kind == want.kind);
    CHECK(hull.arc_center_angle == want.arc_center_angle);
    CHECK(hull.arc_half_width == want.arc_half_width);
}

}  // TEST_SUITE
