#pragma once

#include <string>

#include "xrt/grid.hpp"
#include "xrt/xray.hpp"

namespace xrt {

// Binary formats, all little-endian:
//   RGF1: magic "RGF1", u32 dim, u32 n, n^dim f64 row-major
//   RSG1: magic "RSG1", u32 n_theta, u32 n_s, row-major f64
//   RMK1: magic "RMK1", u32 n_theta, u32 n_s, one byte (0/1) per bin
void write_rgf(const std::string& path, const GridField& f);
GridField read_rgf(const std::string& path);
void write_rsg(const std::string& path, const Sinogram& g);
Sinogram read_rsg(const std::string& path);
void write_rmk(const std::string& path, const LineMask& m);
LineMask read_rmk(const std::string& path);

// CSV export, 2D fields only: one text row per grid row.
void write_csv(const std::string& path, const GridField& f);

}  // namespace xrt
