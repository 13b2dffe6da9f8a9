#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xrt/grid.hpp"
#include "xrt/symkernel.hpp"

namespace xrt {

// Order of the Riesz potential I_alpha f = f * |.|^{-alpha}.
struct RieszOrder {
    double alpha = 1.0;
    int d = 2;
    void validate() const;  // alpha < d, and alpha = d-1 or non-integer
};

// Average of |x|^{-alpha} over the cell [-h/2, h/2]^d, computed to 1e-12
// relative via the homogeneity identity I = I_shell / (1 - 2^{alpha-d}).
double kernel_cell_average(double alpha, int d, double h);

// Linear convolution with the |x|^{-alpha} kernel; zero-padded to 2n per
// axis, center kernel cell replaced by its cell average.
GridField riesz_potential(const GridField& f, const RieszOrder& ord);

// (-Delta)^s via the multiplier |xi|^{2s} on a 4n-padded frequency lattice.
// If f fails the boundary-decay check the issue is described in *warning.
GridField fractional_laplacian(const GridField& f, double s, std::string* warning = nullptr);

// f = c_d (-Delta)^{1/2} Nf with c_d = (2 pi |S^{d-2}|)^{-1}; c_2 = 1/(4 pi).
GridField invert_normal(const GridField& Nf, std::string* warning = nullptr);

// Pointwise derivatives d^beta (I_alpha f)(x0) for all |beta| <= max_order,
// via exact closed-form kernel derivatives (no finite differences). Requires
// f = 0 on a ball of radius 4h around x0.
std::vector<std::pair<MultiIndex, double>> potential_derivatives(
    const GridField& f, const RieszOrder& ord, const std::vector<double>& x0, int max_order);

}  // namespace xrt
