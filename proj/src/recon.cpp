#include "xrt/recon.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>

namespace xrt {

void MaskedProblem::validate() const {
    if (n < 8) throw std::invalid_argument("MaskedProblem: n >= 8 required");
    data.validate();
    if (mask.n_theta != data.n_theta || mask.n_s != data.n_s)
        throw std::invalid_argument("MaskedProblem: mask/data shape mismatch");
    if (support.dim != 2 || support.n != n || known_zero.dim != 2 || known_zero.n != n)
        throw std::invalid_argument("MaskedProblem: constraint grids must be 2D size n");
    for (size_t c = 0; c < support.v.size(); ++c)
        if (support.v[c] > 0.5 && known_zero.v[c] > 0.5)
            throw std::invalid_argument("MaskedProblem: known_zero overlaps support");
}

namespace {

std::vector<uint8_t> free_cells(const MaskedProblem& p) {
    std::vector<uint8_t> free(p.support.v.size());
    for (size_t c = 0; c < free.size(); ++c)
        free[c] = p.support.v[c] > 0.5 && p.known_zero.v[c] <= 0.5;
    return free;
}

void project(GridField& x, const std::vector<uint8_t>& free) {
    for (size_t c = 0; c < x.v.size(); ++c)
        if (!free[c]) x.v[c] = 0.0;
}

void apply_mask(Sinogram& g, const LineMask& m) {
    for (size_t b = 0; b < g.v.size(); ++b)
        if (!m.v[b]) g.v[b] = 0.0;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

std::pair<GridField, ReconReport> cgls_solve(const MaskedProblem& p, int max_iter, double tol,
                                             const GridField* start, const GridField* truth) {
    p.validate();
    if (max_iter < 1 || !(tol > 0.0)) throw std::invalid_argument("cgls_solve: bad parameters");
    if (p.mask.count() == 0) throw std::invalid_argument("cgls_solve: empty mask");
    const auto free = free_cells(p);
    // weighted inner products: ds*dtheta on bins, h^2 on cells (matching the
    // forward/adjoint pairing identity, so xray_adjoint is the true adjoint)
    const double wg = p.data.ds() * p.data.dtheta();
    const double wx = p.support.h() * p.support.h();

    GridField x(2, p.n);
    if (start) {
        if (start->dim != 2 || start->n != p.n)
            throw std::invalid_argument("cgls_solve: bad start shape");
        x = *start;
    }
    project(x, free);

    Sinogram b = p.data;
    apply_mask(b, p.mask);
    double bnorm = std::sqrt(wg * dot(b.v, b.v));

    auto forward = [&](const GridField& f) { return xray_forward_masked(f, p.mask); };
    auto adjoint = [&](const Sinogram& g) {
        GridField f = xray_adjoint(g, p.n);
        project(f, free);
        return f;
    };

    Sinogram r = forward(x);
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = b.v[i] - r.v[i];
    GridField s = adjoint(r);
    GridField d = s;
    double gamma = wx * dot(s.v, s.v);

    ReconReport rep;
    std::vector<double> alphas, betas;
    double res = std::sqrt(wg * dot(r.v, r.v));
    rep.residual_history.push_back(bnorm > 0.0 ? res / bnorm : res);
    int it = 0;
    for (; it < max_iter && gamma > 0.0; ++it) {
        if (bnorm > 0.0 && res / bnorm <= tol) break;
        Sinogram q = forward(d);
        double qq = wg * dot(q.v, q.v);
        if (qq == 0.0) break;
        double alpha = gamma / qq;
        for (size_t c = 0; c < x.v.size(); ++c) x.v[c] += alpha * d.v[c];
        for (size_t i = 0; i < r.v.size(); ++i) r.v[i] -= alpha * q.v[i];
        s = adjoint(r);
        double gamma_new = wx * dot(s.v, s.v);
        double beta = gamma_new / gamma;
        gamma = gamma_new;
        for (size_t c = 0; c < d.v.size(); ++c) d.v[c] = s.v[c] + beta * d.v[c];
        alphas.push_back(alpha);
        betas.push_back(beta);
        double res_new = std::sqrt(wg * dot(r.v, r.v));
        if (res_new > res * (1.0 + 1e-10) + 1e-14 * bnorm)
            throw std::runtime_error("cgls_solve: residual increased (numerical failure)");
        res = res_new;
        rep.residual_history.push_back(bnorm > 0.0 ? res / bnorm : res);
    }
    rep.iterations = it;
    rep.rel_residual = bnorm > 0.0 ? res / bnorm : res;
    if (truth) rep.rel_error = rel_l2_error(x, *truth);
    // Ritz estimates of the spectrum of the (weighted) normal operator from
    // the CG Lanczos tridiagonal
    int k = static_cast<int>(alphas.size());
    if (k > 0) {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            T(i, i) = 1.0 / alphas[i];
            if (i > 0) T(i, i) += betas[i - 1] / alphas[i - 1];
            if (i + 1 < k) {
                double off = std::sqrt(std::max(0.0, betas[i])) / alphas[i];
                T(i, i + 1) = T(i + 1, i) = off;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        rep.sigma_min_est = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
        rep.sigma_max_est = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }
    return {std::move(x), std::move(rep)};
}

double uniqueness_probe(const MaskedProblem& p, int trials, int max_iter, double tol,
                        uint64_t seed) {
    if (trials < 2) throw std::invalid_argument("uniqueness_probe: trials >= 2");
    const auto free = free_cells(p);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<GridField> sols;
    for (int t = 0; t < trials; ++t) {
        GridField x0(2, p.n);
        for (size_t c = 0; c < x0.v.size(); ++c) x0.v[c] = free[c] ? uni(rng) : 0.0;
        auto [x, rep] = cgls_solve(p, max_iter, tol, &x0);
        sols.push_back(std::move(x));
    }
    double norm = 0.0;
    for (const auto& s : sols) norm = std::max(norm, s.l2());
    if (norm == 0.0) return 0.0;
    double worst = 0.0;
    for (size_t a = 0; a < sols.size(); ++a)
        for (size_t b = a + 1; b < sols.size(); ++b) {
            double d2 = 0.0;
            for (size_t c = 0; c < sols[a].v.size(); ++c) {
                double d = sols[a].v[c] - sols[b].v[c];
                d2 += d * d;
            }
            worst = std::max(worst, std::sqrt(d2) / norm);
        }
    return worst;
}

std::vector<double> spectrum_report(const MaskedProblem& p) {
    p.validate();
    if (p.n > 32) throw std::invalid_argument("spectrum_report: n <= 32 required");
    const auto free = free_cells(p);
    std::vector<size_t> cols;
    for (size_t c = 0; c < free.size(); ++c)
        if (free[c]) cols.push_back(c);
    if (cols.empty()) return {};
    const size_t rows = p.data.v.size();
    Eigen::MatrixXd A(rows, cols.size());
    GridField e(2, p.n);
    for (size_t j = 0; j < cols.size(); ++j) {
        std::fill(e.v.begin(), e.v.end(), 0.0);
        e.v[cols[j]] = 1.0;
        Sinogram g = xray_forward_masked(e, p.mask);
        for (size_t b = 0; b < rows; ++b) A(b, j) = g.v[b];
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    std::vector<double> sv(svd.singularValues().data(),
                           svd.singularValues().data() + svd.singularValues().size());
    return sv;
}

RegionSpec helgason_step(const RegionSpec& f_support, const RegionSpec& arc) {
    f_support.validate();
    return convex_hull_of_arc(arc);
}

}  // namespace xrt
