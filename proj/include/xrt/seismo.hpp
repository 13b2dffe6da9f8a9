#pragma once

#include <string>
#include <utility>

#include "xrt/grid.hpp"
#include "xrt/recon.hpp"
#include "xrt/xray.hpp"

namespace xrt {

// Shear-wave-splitting scenario: background speed c0(r) = c0_base + c0_slope*r
// and two direction-independent perturbations supported in the annulus. Data
// lines are those passing through the inner ball of radius data_ball_r; the
// unknown is constrained to zero on the ball of radius known_zero_r.
struct SplitScenario {
    double c0_base = 1.0;
    double c0_slope = 0.0;
    PhantomSpec dc1, dc2;
    double r_inner = 0.5, r_outer = 0.9;  // annulus carrying the perturbations
    double data_ball_r = 0.2;
    double known_zero_r = 0.45;
    // Returns a warning string if the linearization regime |dc| <= 0.05 min c0
    // is violated on grid n; empty if within regime. Throws on invalid geometry.
    std::string validate(int n) const;
};

// Travel-time-difference sinogram: X[(dc2-dc1)/c0^2], zeroed outside lines
// meeting the inner ball. Linearization violations are reported in *warning.
Sinogram synthesize_splitting(const SplitScenario& sc, int n, int n_theta, int n_s,
                              std::string* warning = nullptr);

// Recovers dc2 - dc1 from travel-time data by the annulus/shadow masked
// least-squares problem, then multiplies by c0^2.
GridField recover_difference(const Sinogram& data, const SplitScenario& sc, int n, int max_iter,
                             double tol, ReconReport* report = nullptr);

// Surface-array geometry: data on lines meeting a boundary arc, known_zero
// from the support-theorem step. Returns the problem and the ground truth.
std::pair<MaskedProblem, GridField> half_local_problem(const RegionSpec& arc,
                                                       const PhantomSpec& phantom, int n,
                                                       int n_theta, int n_s);

// Max over data lines of |(integral of 1/c1 - 1/c2) - linearized delta-t| at
// perturbation amplitude eps, with both routes sampling the same rasterized
// fields. O(eps^2): halving eps should quarter the result.
double splitting_linearization_discrepancy(const SplitScenario& sc, int n, double eps);

}  // namespace xrt
