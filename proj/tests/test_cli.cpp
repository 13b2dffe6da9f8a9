#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = XRT_CLI_PATH;

fs::path work_dir() {
    fs::path p = fs::temp_directory_path() / "xrt_cli_tests";
    fs::create_directories(p);
    return p;
}

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void put(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pipeline: xray then adjoint equals normal, byte-identical") {
    fs::path d = work_dir();
    put(d / "ph.cfg", "region = ball\nradius = 0.6\nprofile = bump\n");
    REQUIRE(run("phantom -n 32 --config " + (d / "ph.cfg").string() + " --out " +
                (d / "f.rgf").string()) == 0);
    REQUIRE(run("xray " + (d / "f.rgf").string() + " --n-theta 64 --n-s 48 --out " +
                (d / "g.rsg").string()) == 0);
    REQUIRE(run("adjoint " + (d / "g.rsg").string() + " -n 32 --out " +
                (d / "bp.rgf").string()) == 0);
    REQUIRE(run("normal " + (d / "f.rgf").string() + " --n-theta 64 --n-s 48 --out " +
                (d / "nf.rgf").string()) == 0);
    CHECK(slurp(d / "bp.rgf") == slurp(d / "nf.rgf"));
}

TEST_CASE("riesz and invert run end to end") {
    fs::path d = work_dir();
    put(d / "ph.cfg", "region = ball\nradius = 0.5\nprofile = bump\n");
    REQUIRE(run("phantom -n 64 --config " + (d / "ph.cfg").string() + " --out " +
                (d / "f.rgf").string()) == 0);
    CHECK(run("riesz " + (d / "f.rgf").string() + " --alpha 1 --out " +
              (d / "u.rgf").string()) == 0);
    REQUIRE(run("normal " + (d / "f.rgf").string() + " --out " + (d / "nf.rgf").string()) == 0);
    CHECK(run("invert " + (d / "nf.rgf").string() + " --truth " + (d / "f.rgf").string() +
              " --out " + (d / "inv.rgf").string()) == 0);
}

TEST_CASE("csv export writes text rows") {
    fs::path d = work_dir();
    put(d / "ph.cfg", "region = ball\nradius = 0.5\n profile = constant\nvalue = 2\n");
    REQUIRE(run("phantom -n 16 --config " + (d / "ph.cfg").string() + " --csv --out " +
                (d / "f.csv").string()) == 0);
    std::string text = slurp(d / "f.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 16);
}

TEST_CASE("validation failures exit with code 2") {
    fs::path d = work_dir();
    CHECK(run("xray " + (d / "missing.rgf").string() + " --n-theta 8 --n-s 8 --out " +
              (d / "x.rsg").string()) == 2);
    put(d / "bad.cfg", "region = ball\nradius = 0.5\nbogus = 1\n");
    CHECK(run("phantom -n 16 --config " + (d / "bad.cfg").string() + " --out " +
              (d / "f.rgf").string()) == 2);
    put(d / "dup.cfg", "n = 16\nn = 17\n");
    CHECK(run("roi-recon --config " + (d / "dup.cfg").string()) == 2);
    CHECK(run("lemma-verify -d 3 --alpha 1 --degree 4") == 2);
    CHECK(run("nonsense-subcommand") == 2);
}

TEST_CASE("lemma-verify and abel-tables succeed on admissible input") {
    CHECK(run("lemma-verify -d 2 --alpha 1/2 --degree 2") == 0);
    fs::path d = work_dir();
    CHECK(run("abel-tables 2 12 --out " + (d / "abel.txt").string()) == 0);
    std::string rep = slurp(d / "abel.txt");
    CHECK(rep.find("PASS table vs oracle") != std::string::npos);
    CHECK(rep.find("A[0][2] = 1") != std::string::npos);
}

TEST_CASE("roi-recon is deterministic for a fixed config and seed") {
    fs::path d = work_dir();
    put(d / "roi.cfg",
        "n = 16\nn_theta = 96\nn_s = 64\nmax_iter = 120\nprobe_trials = 2\nprobe_iters = 80\n");
    REQUIRE(run("roi-recon --config " + (d / "roi.cfg").string() + " --seed 11 --out " +
                (d / "r1.txt").string()) == 0);
    REQUIRE(run("roi-recon --config " + (d / "roi.cfg").string() + " --seed 11 --threads 2 --out " +
                (d / "r2.txt").string()) == 0);
    CHECK(slurp(d / "r1.txt") == slurp(d / "r2.txt"));
    CHECK(slurp(d / "r1.txt").find("rel_error=") != std::string::npos);
}

TEST_CASE("seismo and spectrum reports") {
    fs::path d = work_dir();
    put(d / "sm.cfg", "n = 16\nn_theta = 96\nn_s = 64\nmax_iter = 150\n");
    REQUIRE(run("seismo --config " + (d / "sm.cfg").string() + " --out " +
                (d / "sm.txt").string()) == 0);
    std::string rep = slurp(d / "sm.txt");
    CHECK(rep.find("discrepancy_ratio=") != std::string::npos);
    put(d / "sp.cfg", "n = 16\nmask = full\nsupport = disc\n");
    REQUIRE(run("spectrum --config " + (d / "sp.cfg").string() + " --out " +
                (d / "sp.txt").string()) == 0);
    CHECK(slurp(d / "sp.txt").find("condition=") != std::string::npos);
}

}  // TEST_SUITE
