#include "xrt/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts unsupported");

namespace xrt {

namespace {

void put_u32(std::ostream& os, uint32_t x) {
    os.write(reinterpret_cast<const char*>(&x), 4);
}

uint32_t get_u32(std::istream& is) {
    uint32_t x = 0;
    is.read(reinterpret_cast<char*>(&x), 4);
    if (!is) throw std::runtime_error("file truncated");
    return x;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path, const char magic[4]) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::invalid_argument("cannot open: " + path);
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, magic, 4) != 0)
        throw std::invalid_argument("bad magic in " + path);
    return is;
}

}  // namespace

void write_rgf(const std::string& path, const GridField& f) {
    f.validate();
    auto os = open_out(path);
    os.write("RGF1", 4);
    put_u32(os, static_cast<uint32_t>(f.dim));
    put_u32(os, static_cast<uint32_t>(f.n));
    os.write(reinterpret_cast<const char*>(f.v.data()), f.v.size() * sizeof(double));
    if (!os) throw std::runtime_error("write failed: " + path);
}

GridField read_rgf(const std::string& path) {
    auto is = open_in(path, "RGF1");
    uint32_t dim = get_u32(is), n = get_u32(is);
    GridField f(static_cast<int>(dim), static_cast<int>(n));
    is.read(reinterpret_cast<char*>(f.v.data()), f.v.size() * sizeof(double));
    if (!is) throw std::runtime_error("file truncated: " + path);
    f.validate();
    return f;
}

void write_rsg(const std::string& path, const Sinogram& g) {
    g.validate();
    auto os = open_out(path);
    os.write("RSG1", 4);
    put_u32(os, static_cast<uint32_t>(g.n_theta));
    put_u32(os, static_cast<uint32_t>(g.n_s));
    os.write(reinterpret_cast<const char*>(g.v.data()), g.v.size() * sizeof(double));
    if (!os) throw std::runtime_error("write failed: " + path);
}

Sinogram read_rsg(const std::string& path) {
    auto is = open_in(path, "RSG1");
    uint32_t nth = get_u32(is), ns = get_u32(is);
    Sinogram g(static_cast<int>(nth), static_cast<int>(ns));
    is.read(reinterpret_cast<char*>(g.v.data()), g.v.size() * sizeof(double));
    if (!is) throw std::runtime_error("file truncated: " + path);
    g.validate();
    return g;
}

void write_rmk(const std::string& path, const LineMask& m) {
    auto os = open_out(path);
    os.write("RMK1", 4);
    put_u32(os, static_cast<uint32_t>(m.n_theta));
    put_u32(os, static_cast<uint32_t>(m.n_s));
    os.write(reinterpret_cast<const char*>(m.v.data()), m.v.size());
    if (!os) throw std::runtime_error("write failed: " + path);
}

LineMask read_rmk(const std::string& path) {
    auto is = open_in(path, "RMK1");
    uint32_t nth = get_u32(is), ns = get_u32(is);
    LineMask m(static_cast<int>(nth), static_cast<int>(ns));
    is.read(reinterpret_cast<char*>(m.v.data()), m.v.size());
    if (!is) throw std::runtime_error("file truncated: " + path);
    for (uint8_t b : m.v)
        if (b > 1) throw std::invalid_argument("RMK1: byte not 0/1 in " + path);
    return m;
}

void write_csv(const std::string& path, const GridField& f) {
    if (f.dim != 2) throw std::invalid_argument("write_csv: 2D fields only");
    auto os = open_out(path);
    char buf[40];
    for (int iy = 0; iy < f.n; ++iy) {
        for (int ix = 0; ix < f.n; ++ix) {
            std::snprintf(buf, sizeof buf, "%.17g", f.at(ix, iy));
            os << buf << (ix + 1 < f.n ? "," : "\n");
        }
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace xrt
