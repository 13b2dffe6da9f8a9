#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "xrt/grid.hpp"
#include "xrt/xray.hpp"

namespace xrt {

// Masked partial-data least-squares problem: find f with f = 0 on known_zero
// and outside support such that Xf matches data on the masked bins.
struct MaskedProblem {
    int n = 0;  // grid size of the unknown
    Sinogram data;
    LineMask mask;
    GridField support;     // indicator: unknown may be nonzero here
    GridField known_zero;  // indicator: unknown forced to 0 here
    void validate() const;
};

struct ReconReport {
    int iterations = 0;
    double rel_residual = 0.0;
    double rel_error = -1.0;  // vs ground truth when available
    double sigma_min_est = 0.0, sigma_max_est = 0.0;
    uint64_t seed = 0;  // initialization seed (0 = zero start)
    std::vector<double> residual_history;
};

// CGLS on the masked, support-restricted normal equations. Throws on
// residual increase beyond 1e-10 relative slack.
std::pair<GridField, ReconReport> cgls_solve(const MaskedProblem& p, int max_iter, double tol,
                                             const GridField* start = nullptr,
                                             const GridField* truth = nullptr);

// Max pairwise relative L2 distance of CGLS solutions from `trials` random
// feasible starts.
double uniqueness_probe(const MaskedProblem& p, int trials, int max_iter, double tol,
                        uint64_t seed);

// Singular values (descending) of the explicit masked operator matrix,
// assembled column by column over the free cells. Requires n <= 32.
std::vector<double> spectrum_report(const MaskedProblem& p);

// Region known to be zero by the support theorem once data vanishes on all
// lines meeting the arc: the convex hull of the arc. f_support is the prior
// support of the unknown (validated; the returned region is independent of it).
RegionSpec helgason_step(const RegionSpec& f_support, const RegionSpec& arc);

}  // namespace xrt
