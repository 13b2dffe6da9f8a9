#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "xrt/io.hpp"

using namespace xrt;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("xrt_io_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("rgf round trip is exact and rewrite is byte-identical") {
    GridField f(2, 16);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (auto& v : f.v) v = uni(rng);
    std::string p1 = tmp_path("a.rgf"), p2 = tmp_path("b.rgf");
    write_rgf(p1, f);
    GridField g = read_rgf(p1);
    CHECK(g.dim == f.dim);
    CHECK(g.n == f.n);
    CHECK(g.v == f.v);
    write_rgf(p2, g);
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("rgf 3d round trip") {
    GridField f(3, 8);
    for (size_t c = 0; c < f.v.size(); ++c) f.v[c] = static_cast<double>(c) * 0.5;
    std::string p = tmp_path("c.rgf");
    write_rgf(p, f);
    GridField g = read_rgf(p);
    CHECK(g.dim == 3);
    CHECK(g.v == f.v);
    std::remove(p.c_str());
}

TEST_CASE("rsg round trip") {
    Sinogram s(8, 6);
    for (size_t b = 0; b < s.v.size(); ++b) s.v[b] = -1.5 * static_cast<double>(b);
    std::string p = tmp_path("a.rsg");
    write_rsg(p, s);
    Sinogram t = read_rsg(p);
    CHECK(t.n_theta == 8);
    CHECK(t.n_s == 6);
    CHECK(t.v == s.v);
    std::remove(p.c_str());
}

TEST_CASE("rmk round trip") {
    LineMask m(8, 6);
    for (size_t b = 0; b < m.v.size(); ++b) m.v[b] = b % 3 == 0;
    std::string p = tmp_path("a.rmk");
    write_rmk(p, m);
    LineMask q = read_rmk(p);
    CHECK(q.n_theta == 8);
    CHECK(q.n_s == 6);
    CHECK(q.v == m.v);
    std::remove(p.c_str());
}

TEST_CASE("bad magic rejected") {
    std::string p = tmp_path("bad.rgf");
    {
        std::ofstream out(p, std::ios::binary);
        out << "NOPE" << std::string(16, '\0');
    }
    CHECK_THROWS(read_rgf(p));
    CHECK_THROWS(read_rsg(p));
    CHECK_THROWS(read_rmk(p));
    std::remove(p.c_str());
    CHECK_THROWS(read_rgf(tmp_path("does_not_exist.rgf")));
}

TEST_CASE("csv export") {
    GridField f(2, 8);
    f.at(0, 0) = 1.5;
    f.at(7, 7) = -2.0;
    std::string p = tmp_path("a.csv");
    write_csv(p, f);
    std::string text = slurp(p);
    // 8 rows, first value of first row is 1.5
    CHECK(std::count(text.begin(), text.end(), '\n') == 8);
    CHECK(text.substr(0, 3) == "1.5");
    std::remove(p.c_str());
    GridField g3(3, 8);
    CHECK_THROWS(write_csv(tmp_path("b.csv"), g3));
}

}  // TEST_SUITE
