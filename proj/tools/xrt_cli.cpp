// xrt: command-line driver for the X-ray transform toolkit.
//
// Subcommands wrap the library modules into reproducible experiments driven
// by plain key=value config files. Exit codes: 0 success, 2 validation
// error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "xrt/abel.hpp"
#include "xrt/grid.hpp"
#include "xrt/io.hpp"
#include "xrt/recon.hpp"
#include "xrt/riesz.hpp"
#include "xrt/seismo.hpp"
#include "xrt/symkernel.hpp"
#include "xrt/threading.hpp"
#include "xrt/xray.hpp"

namespace {

using xrt::Rat;

struct Config {
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) != 0; }
    std::string str(const std::string& k) const {
        auto it = kv.find(k);
        if (it == kv.end()) throw std::invalid_argument("config: missing key '" + k + "'");
        return it->second;
    }
    std::string str_or(const std::string& k, const std::string& dflt) const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }
    double num(const std::string& k) const {
        size_t pos = 0;
        double v = std::stod(str(k), &pos);
        if (pos != str(k).size())
            throw std::invalid_argument("config: bad number for '" + k + "'");
        return v;
    }
    double num_or(const std::string& k, double dflt) const { return has(k) ? num(k) : dflt; }
    int integer(const std::string& k) const {
        double v = num(k);
        int i = static_cast<int>(v);
        if (i != v) throw std::invalid_argument("config: '" + k + "' must be an integer");
        return i;
    }
    int integer_or(const std::string& k, int dflt) const {
        return has(k) ? integer(k) : dflt;
    }

    void restrict_keys(const std::set<std::string>& allowed) const {
        for (const auto& [k, v] : kv)
            if (!allowed.count(k))
                throw std::invalid_argument("config: unknown key '" + k + "'");
    }
};

Config load_config(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw std::invalid_argument("config file not found: " + path);
    std::ifstream in(path);
    Config cfg;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value");
        std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config: empty key at line " +
                                                     std::to_string(lineno));
        if (!cfg.kv.emplace(key, val).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
    }
    return cfg;
}

const std::set<std::string> kRegionKeys = {"region",  "center_x", "center_y",      "radius",
                                           "r_inner", "r_outer",  "arc_angle",     "arc_half_width"};
const std::set<std::string> kPhantomKeys = [] {
    std::set<std::string> s = kRegionKeys;
    s.insert({"profile", "value", "mode_k"});
    return s;
}();

xrt::RegionSpec parse_region(const Config& cfg) {
    std::string kind = cfg.str("region");
    if (kind == "ball")
        return xrt::RegionSpec::ball(
            {cfg.num_or("center_x", 0.0), cfg.num_or("center_y", 0.0), 0.0}, cfg.num("radius"));
    if (kind == "annulus") return xrt::RegionSpec::annulus(cfg.num("r_inner"), cfg.num("r_outer"));
    if (kind == "segment")
        return xrt::RegionSpec::disc_segment(cfg.num_or("arc_angle", 0.0),
                                             cfg.num("arc_half_width"));
    throw std::invalid_argument("config: region must be ball|annulus|segment");
}

xrt::PhantomSpec parse_phantom(const Config& cfg) {
    xrt::PhantomComponent pc;
    pc.region = parse_region(cfg);
    std::string prof = cfg.str_or("profile", "bump");
    if (prof == "constant")
        pc.profile = xrt::PhantomComponent::Profile::Constant;
    else if (prof == "bump")
        pc.profile = xrt::PhantomComponent::Profile::RadialBump;
    else if (prof == "cosine")
        pc.profile = xrt::PhantomComponent::Profile::CosineMode;
    else
        throw std::invalid_argument("config: profile must be constant|bump|cosine");
    pc.value = cfg.num_or("value", 1.0);
    pc.mode_k = cfg.integer_or("mode_k", 0);
    xrt::PhantomSpec spec;
    spec.parts.push_back(pc);
    return spec;
}

void require_input(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw std::invalid_argument("input not found: " + path);
}

void write_field(const std::string& path, const xrt::GridField& f, bool csv) {
    if (csv)
        xrt::write_csv(path, f);
    else
        xrt::write_rgf(path, f);
}

void write_report(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream o(out, std::ios::binary);
        if (!o) throw std::invalid_argument("cannot open output: " + out);
        o << text;
    }
}

// Deterministic rational sample points with |x| != 0, away from the lattice
// degeneracies of the kernel expansions.
std::vector<std::vector<Rat>> rational_points(int d, int count) {
    std::vector<std::vector<Rat>> pts;
    for (int p = 0; p < count; ++p) {
        std::vector<Rat> x(d);
        for (int i = 0; i < d; ++i) {
            long num = 2 * p + 3 * i + 1;
            long den = p + i + 2;
            if ((p + i) % 2) num = -num;
            x[i] = Rat(num, den);
            x[i].canonicalize();
        }
        pts.push_back(std::move(x));
    }
    return pts;
}

int cmd_lemma_verify(int d, const std::string& alpha_str, int degree) {
    Rat alpha = xrt::parse_rat(alpha_str);
    xrt::check_lemma_hypothesis(alpha, d, degree);
    auto pts = rational_points(d, 20);
    bool all_ok = true;
    std::vector<xrt::MultiIndex> gammas;
    std::function<void(xrt::MultiIndex&, int, int)> enumerate = [&](xrt::MultiIndex& g, int axis,
                                                                    int rem) {
        if (axis == d) {
            gammas.push_back(g);
            return;
        }
        for (int k = 0; k <= rem; ++k) {
            g[axis] = k;
            enumerate(g, axis + 1, rem - k);
        }
    };
    xrt::MultiIndex g(d, 0);
    enumerate(g, 0, degree);
    for (const auto& gamma : gammas) {
        std::map<xrt::MultiIndex, Rat> poly{{gamma, Rat(1)}};
        xrt::DerivExpansion e = xrt::expand_polynomial_times_kernel(poly, d);
        bool ok = true;
        for (const auto& x : pts) {
            Rat lhs = xrt::eval_deriv_div_c(e, x, alpha);
            Rat rhs = xrt::eval_d_monomial_div_c(gamma, x);
            if (lhs != rhs) {
                ok = false;
                break;
            }
        }
        std::string name = "x^(";
        for (int i = 0; i < d; ++i) name += (i ? "," : "") + std::to_string(gamma[i]);
        name += ")";
        std::printf("%s %s\n", ok ? "PASS" : "FAIL", name.c_str());
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 3;
}

int cmd_abel_tables(int k_max, int n_max, const std::string& out) {
    xrt::AbelTable tbl = xrt::abel_coefficients(k_max, n_max);
    std::ostringstream rep;
    bool all_ok = true;
    for (int k = 0; k <= k_max; ++k) {
        for (int n = 0; n <= n_max; ++n) {
            mpq_class oracle = xrt::abel_coefficients_oracle(k, n);
            bool ok = oracle.get_den() == 1 && tbl.coeff(k, n) == oracle.get_num();
            all_ok = all_ok && ok;
            rep << "A[" << k << "][" << n << "] = " << tbl.coeff(k, n).get_str()
                << (ok ? "" : "  MISMATCH vs oracle " + oracle.get_str()) << "\n";
        }
        if (n_max >= 4 * k)
            rep << "positivity_threshold[" << k << "] = " << xrt::positivity_threshold(tbl, k)
                << "\n";
    }
    rep << (all_ok ? "PASS" : "FAIL") << " table vs oracle\n";
    write_report(out, rep.str());
    return all_ok ? 0 : 3;
}

const std::set<std::string> kRoiKeys = {
    "n",           "n_theta",   "n_s",        "phantom_r_inner", "phantom_r_outer",
    "data_ball_r", "known_zero_r", "max_iter", "tol",             "probe_trials",
    "probe_iters"};

int cmd_roi_recon(const Config& cfg, uint64_t seed, const std::string& out) {
    cfg.restrict_keys(kRoiKeys);
    int n = cfg.integer("n");
    int n_theta = cfg.integer_or("n_theta", 8 * n);
    int n_s = cfg.integer_or("n_s", 4 * n);
    double ri = cfg.num_or("phantom_r_inner", 0.5), ro = cfg.num_or("phantom_r_outer", 0.9);
    double ball_r = cfg.num_or("data_ball_r", 0.2), kz_r = cfg.num_or("known_zero_r", 0.45);
    int max_iter = cfg.integer_or("max_iter", 2000);
    double tol = cfg.num_or("tol", 1e-10);

    xrt::PhantomSpec ps;
    xrt::PhantomComponent pc;
    pc.region = xrt::RegionSpec::annulus(ri, ro);
    pc.profile = xrt::PhantomComponent::Profile::RadialBump;
    ps.parts.push_back(pc);
    xrt::GridField truth = xrt::rasterize(ps, n, 2);

    xrt::MaskedProblem p;
    p.n = n;
    p.mask = xrt::lines_meeting_region(n_theta, n_s, xrt::RegionSpec::ball({0, 0, 0}, ball_r),
                                       truth.h());
    p.data = xrt::xray_forward_masked(truth, p.mask);
    p.support = xrt::region_mask(xrt::RegionSpec::annulus(ri, ro), n, 2);
    p.known_zero = xrt::region_mask(xrt::RegionSpec::ball({0, 0, 0}, kz_r), n, 2);

    auto [x, rep] = xrt::cgls_solve(p, max_iter, tol, nullptr, &truth);
    std::ostringstream r;
    r << "n=" << n << " n_theta=" << n_theta << " n_s=" << n_s << "\n";
    r << "iterations=" << rep.iterations << "\n";
    r << "rel_residual=" << rep.rel_residual << "\n";
    r << "rel_error=" << rep.rel_error << "\n";
    r << "sigma_min_est=" << rep.sigma_min_est << " sigma_max_est=" << rep.sigma_max_est << "\n";
    if (cfg.has("probe_trials")) {
        int trials = cfg.integer("probe_trials");
        int probe_iters = cfg.integer_or("probe_iters", max_iter);
        double dist = xrt::uniqueness_probe(p, trials, probe_iters, tol, seed);
        r << "uniqueness_probe=" << dist << "\n";
    }
    write_report(out, r.str());
    return 0;
}

const std::set<std::string> kSeismoKeys = {
    "n",       "n_theta",     "n_s",          "c0_base", "c0_slope", "dc1_value",
    "dc2_value", "r_inner",   "r_outer",      "data_ball_r", "known_zero_r",
    "max_iter", "tol",        "eps"};

int cmd_seismo(const Config& cfg, const std::string& out) {
    cfg.restrict_keys(kSeismoKeys);
    int n = cfg.integer("n");
    int n_theta = cfg.integer_or("n_theta", 8 * n);
    int n_s = cfg.integer_or("n_s", 4 * n);

    xrt::SplitScenario sc;
    sc.c0_base = cfg.num_or("c0_base", 1.0);
    sc.c0_slope = cfg.num_or("c0_slope", 0.0);
    sc.r_inner = cfg.num_or("r_inner", 0.5);
    sc.r_outer = cfg.num_or("r_outer", 0.9);
    sc.data_ball_r = cfg.num_or("data_ball_r", 0.2);
    sc.known_zero_r = cfg.num_or("known_zero_r", 0.45);
    auto annulus_bump = [&](double value) {
        xrt::PhantomSpec ps;
        xrt::PhantomComponent pc;
        pc.region = xrt::RegionSpec::annulus(sc.r_inner, sc.r_outer);
        pc.profile = xrt::PhantomComponent::Profile::RadialBump;
        pc.value = value;
        ps.parts.push_back(pc);
        return ps;
    };
    sc.dc1 = annulus_bump(cfg.num_or("dc1_value", 0.01));
    sc.dc2 = annulus_bump(cfg.num_or("dc2_value", 0.03));

    std::string warning;
    xrt::Sinogram data = xrt::synthesize_splitting(sc, n, n_theta, n_s, &warning);
    xrt::ReconReport rep;
    xrt::GridField diff = xrt::recover_difference(data, sc, n, cfg.integer_or("max_iter", 2000),
                                                  cfg.num_or("tol", 1e-10), &rep);
    xrt::GridField d1 = xrt::rasterize(sc.dc1, n, 2), d2 = xrt::rasterize(sc.dc2, n, 2);
    xrt::GridField want(2, n);
    for (size_t c = 0; c < want.v.size(); ++c) want.v[c] = d2.v[c] - d1.v[c];

    double eps = cfg.num_or("eps", 0.01);
    double e1 = xrt::splitting_linearization_discrepancy(sc, n, eps);
    double e2 = xrt::splitting_linearization_discrepancy(sc, n, eps / 2);

    std::ostringstream r;
    r << "n=" << n << " n_theta=" << n_theta << " n_s=" << n_s << "\n";
    if (!warning.empty()) r << "warning=" << warning << "\n";
    r << "iterations=" << rep.iterations << "\n";
    r << "rel_residual=" << rep.rel_residual << "\n";
    r << "rel_error=" << xrt::rel_l2_error(diff, want) << "\n";
    r << "linearization_discrepancy(eps)=" << e1 << "\n";
    r << "linearization_discrepancy(eps/2)=" << e2 << "\n";
    r << "discrepancy_ratio=" << (e2 > 0 ? e1 / e2 : 0.0) << "\n";
    write_report(out, r.str());
    return 0;
}

const std::set<std::string> kSpectrumKeys = {"n",       "n_theta",     "n_s",     "mask",
                                             "data_ball_r", "support", "r_inner", "r_outer",
                                             "known_zero_r"};

int cmd_spectrum(const Config& cfg, const std::string& out) {
    cfg.restrict_keys(kSpectrumKeys);
    int n = cfg.integer("n");
    int n_theta = cfg.integer_or("n_theta", 4 * n);
    int n_s = cfg.integer_or("n_s", 3 * n);

    xrt::MaskedProblem p;
    p.n = n;
    std::string mask = cfg.str_or("mask", "full");
    if (mask == "full") {
        p.mask = xrt::LineMask(n_theta, n_s);
        std::fill(p.mask.v.begin(), p.mask.v.end(), 1);
    } else if (mask == "ball") {
        p.mask = xrt::lines_meeting_region(
            n_theta, n_s, xrt::RegionSpec::ball({0, 0, 0}, cfg.num_or("data_ball_r", 0.2)),
            2.0 / n);
    } else {
        throw std::invalid_argument("config: mask must be full|ball");
    }
    std::string support = cfg.str_or("support", "disc");
    if (support == "disc")
        p.support = xrt::region_mask(xrt::RegionSpec::ball({0, 0, 0}, 1.0), n, 2);
    else if (support == "annulus")
        p.support = xrt::region_mask(
            xrt::RegionSpec::annulus(cfg.num_or("r_inner", 0.5), cfg.num_or("r_outer", 0.9)), n,
            2);
    else
        throw std::invalid_argument("config: support must be disc|annulus");
    p.known_zero = xrt::GridField(2, n);
    if (cfg.has("known_zero_r")) {
        p.known_zero =
            xrt::region_mask(xrt::RegionSpec::ball({0, 0, 0}, cfg.num("known_zero_r")), n, 2);
        for (size_t c = 0; c < p.support.v.size(); ++c)
            if (p.known_zero.v[c] > 0.5) p.support.v[c] = 0.0;
    }
    p.data = xrt::Sinogram(n_theta, n_s);

    std::vector<double> sv = xrt::spectrum_report(p);
    std::ostringstream r;
    double smax = sv.empty() ? 0.0 : sv.front(), smin = sv.empty() ? 0.0 : sv.back();
    r << "count=" << sv.size() << "\n";
    r << "sigma_max=" << smax << "\n";
    r << "sigma_min=" << smin << "\n";
    if (smin > 0)
        r << "condition=" << smax / smin << "\n";
    else
        r << "condition=inf\n";
    for (double s : sv) r << s << "\n";
    write_report(out, r.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"X-ray transform toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path, alpha_str = "1", truth_path;
    uint64_t seed = 0;
    int threads = 0, d = 2, degree = 6, k_max = 8, n_max = 40, grid_n = 0;
    int n_theta = 0, n_s = 0;
    bool csv = false;

    auto add_common = [&](CLI::App* c, bool with_config) {
        if (with_config) c->add_option("--config", config_path, "key=value config file");
        c->add_option("--seed", seed, "random seed");
        c->add_option("--threads", threads, "worker threads (0 = all cores)");
        c->add_option("--out", out_path, "output path");
        c->add_flag("--csv", csv, "write 2D fields as CSV instead of RGF1");
        return c;
    };

    auto* phantom = add_common(app.add_subcommand("phantom", "rasterize a phantom"), true);
    phantom->add_option("-n", grid_n, "grid size")->required();

    auto* cxray = add_common(app.add_subcommand("xray", "forward transform"), false);
    cxray->add_option("input", in_path, "input RGF1 field")->required();
    cxray->add_option("--n-theta", n_theta, "directions")->required();
    cxray->add_option("--n-s", n_s, "offsets")->required();

    auto* cadj = add_common(app.add_subcommand("adjoint", "backprojection"), false);
    cadj->add_option("input", in_path, "input RSG1 sinogram")->required();
    cadj->add_option("-n", grid_n, "output grid size")->required();

    auto* cnormal = add_common(app.add_subcommand("normal", "X*X"), false);
    cnormal->add_option("input", in_path, "input RGF1 field")->required();
    cnormal->add_option("--n-theta", n_theta, "directions (default 2n)");
    cnormal->add_option("--n-s", n_s, "offsets (default 3n/2)");

    auto* criesz = add_common(app.add_subcommand("riesz", "Riesz potential"), false);
    criesz->add_option("input", in_path, "input RGF1 field")->required();
    criesz->add_option("--alpha", alpha_str, "kernel order")->required();

    auto* cinv = add_common(app.add_subcommand("invert", "invert the normal operator"), false);
    cinv->add_option("input", in_path, "input RGF1 field (Nf)")->required();
    cinv->add_option("--truth", truth_path, "reference field for error report");

    auto* clemma = app.add_subcommand("lemma-verify", "exact polynomial-generation check");
    clemma->add_option("-d", d, "dimension")->required();
    clemma->add_option("--alpha", alpha_str, "kernel order (rational)")->required();
    clemma->add_option("--degree", degree, "max monomial degree")->required();

    auto* cabel = add_common(app.add_subcommand("abel-tables", "Abel coefficient tables"), false);
    cabel->add_option("k_max", k_max, "max Chebyshev index")->required();
    cabel->add_option("n_max", n_max, "max derivative order")->required();

    auto* croi = add_common(app.add_subcommand("roi-recon", "ROI reconstruction"), true);
    auto* cseismo = add_common(app.add_subcommand("seismo", "splitting scenario"), true);
    auto* cspec = add_common(app.add_subcommand("spectrum", "masked-operator SVD"), true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (threads > 0) xrt::set_thread_count(threads);
        if (phantom->parsed()) {
            Config cfg = load_config(config_path);
            cfg.restrict_keys(kPhantomKeys);
            if (out_path.empty()) throw std::invalid_argument("--out is required");
            write_field(out_path, xrt::rasterize(parse_phantom(cfg), grid_n, 2), csv);
        } else if (cxray->parsed()) {
            require_input(in_path);
            if (out_path.empty()) throw std::invalid_argument("--out is required");
            xrt::write_rsg(out_path, xrt::xray_forward(xrt::read_rgf(in_path), n_theta, n_s));
        } else if (cadj->parsed()) {
            require_input(in_path);
            if (out_path.empty()) throw std::invalid_argument("--out is required");
            write_field(out_path, xrt::xray_adjoint(xrt::read_rsg(in_path), grid_n), csv);
        } else if (cnormal->parsed()) {
            require_input(in_path);
            if (out_path.empty()) throw std::invalid_argument("--out is required");
            xrt::GridField f = xrt::read_rgf(in_path);
            xrt::GridField Nf = (n_theta > 0 && n_s > 0)
                                    ? xrt::normal_operator(f, n_theta, n_s)
                                    : xrt::normal_operator(f);
            write_field(out_path, Nf, csv);
        } else if (criesz->parsed()) {
            require_input(in_path);
            if (out_path.empty()) throw std::invalid_argument("--out is required");
            xrt::GridField f = xrt::read_rgf(in_path);
            xrt::RieszOrder ord;
            ord.alpha = xrt::parse_rat(alpha_str).get_d();
            ord.d = f.dim;
            write_field(out_path, xrt::riesz_potential(f, ord), csv);
        } else if (cinv->parsed()) {
            require_input(in_path);
            if (out_path.empty()) throw std::invalid_argument("--out is required");
            std::string warning;
            xrt::GridField f = xrt::invert_normal(xrt::read_rgf(in_path), &warning);
            if (!warning.empty()) std::printf("warning: %s\n", warning.c_str());
            if (!truth_path.empty()) {
                require_input(truth_path);
                std::printf("rel_error=%.6g\n", xrt::rel_l2_error(f, xrt::read_rgf(truth_path)));
            }
            write_field(out_path, f, csv);
        } else if (clemma->parsed()) {
            return cmd_lemma_verify(d, alpha_str, degree);
        } else if (cabel->parsed()) {
            return cmd_abel_tables(k_max, n_max, out_path);
        } else if (croi->parsed()) {
            return cmd_roi_recon(load_config(config_path), seed, out_path);
        } else if (cseismo->parsed()) {
            return cmd_seismo(load_config(config_path), out_path);
        } else if (cspec->parsed()) {
            return cmd_spectrum(load_config(config_path), out_path);
        }
    } catch (const xrt::HypothesisViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
