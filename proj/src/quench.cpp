#include "esq/quench.hpp"
#include "esq/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace esq {

LipkinQuench::LipkinQuench(long n, double kappa_, double eta_)
    : n_particles(n), kappa(kappa_), eta(eta_)
{
    LipkinSpec check(n, kappa_);  // N/kappa validation
    if (kappa_ <= 0.0 || kappa_ >= 0.8)
        throw std::invalid_argument("LipkinQuench: ESQPT quench requires 0 < kappa < 4/5");
    if (eta_ < 0.0) throw std::invalid_argument("LipkinQuench: eta must be >= 0");
}

CoupledTopQuench::CoupledTopQuench(long j_, double xi0_, double xi1_)
    : j(j_), xi0(xi0_), xi1(xi1_)
{
    CoupledTopSpec check(j_, xi1_ < 0.0 ? 0.0 : xi1_);
    if (xi0_ <= 1.0) throw std::invalid_argument("CoupledTopQuench: quench requires xi0 > 1");
    if (xi1_ < 0.0) throw std::invalid_argument("CoupledTopQuench: xi1 must be >= 0");
}

namespace {

std::string fmt_key(const char* fmt, ...)
{
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    return buf;
}

EigenSystem eigensolve_cached(const std::string& key, EigCache* cache,
                              const std::function<Matrix()>& builder)
{
    if (cache) {
        if (auto hit = cache->load(key)) return std::move(*hit);
    }
    EigenSystem es = eigensolve(builder(), key);
    if (cache) cache->store(key, es);
    return es;
}

// H_lp + eta (Jz + N/2): the eta term only shifts the field coefficient.
Matrix lipkin_post_quench(long n, double kappa, double eta, const SectorIsometry& iso)
{
    SpinBasis basis(0.5 * static_cast<double>(n));
    auto ops = build_collective_ops(basis);
    const double nn = static_cast<double>(n);
    Matrix h = -(4.0 * (1.0 - kappa) / nn) * (ops.jx.mat * ops.jx.mat) +
               (kappa + eta) * (ops.jz.mat + 0.5 * nn * Matrix::Identity(basis.dim(), basis.dim()));
    return iso.project_operator(h);
}

std::vector<std::vector<Eigen::Index>> cluster_levels(const RVector& evals, double tol)
{
    std::vector<std::vector<Eigen::Index>> clusters;
    for (Eigen::Index n = 0; n < evals.size(); ++n) {
        if (clusters.empty() || evals(n) - evals(clusters.back().back()) > tol)
            clusters.push_back({});
        clusters.back().push_back(n);
    }
    return clusters;
}

double default_degeneracy_tol(const RVector& evals)
{
    double span = evals.size() > 1 ? evals(evals.size() - 1) - evals(0) : 1.0;
    return 1e-10 * std::max(span, 1.0);
}

} // namespace

Vector prepare_ground_state(const LipkinSpec& spec, EigCache* cache)
{
    auto iso = lipkin_sector_isometry(spec, 1);
    auto key = fmt_key("lipkin|even|N=%ld|kappa=%.17g|eta=0", spec.n_particles, spec.kappa);
    auto es = eigensolve_cached(key, cache, [&] { return lipkin_post_quench(spec.n_particles, spec.kappa, 0.0, iso); });
    return es.vectors.col(0);
}

Vector prepare_ground_state(const CoupledTopSpec& spec, EigCache* cache)
{
    auto key = fmt_key("ct|V++|j=%ld|xi=%.17g", spec.j, spec.xi);
    auto es = eigensolve_cached(key, cache, [&] { return coupled_top_sector_matrix(spec, 1, 1); });
    return es.vectors.col(0);
}

QuenchWorkspace prepare_quench(const QuenchSpec& spec, EigCache* cache)
{
    QuenchWorkspace ws{spec, 0.0, {}, {}, {}, {}};

    Matrix hf;
    if (auto* lq = std::get_if<LipkinQuench>(&spec)) {
        ws.j_phase = lq->j();
        ws.iso = lipkin_sector_isometry(LipkinSpec(lq->n_particles, lq->kappa), 1);
        ws.psi0 = prepare_ground_state(LipkinSpec(lq->n_particles, lq->kappa), cache);
        auto key = fmt_key("lipkin|even|N=%ld|kappa=%.17g|eta=%.17g", lq->n_particles, lq->kappa, lq->eta);
        hf = lipkin_post_quench(lq->n_particles, lq->kappa, lq->eta, ws.iso);
        ws.eig = eigensolve_cached(key, cache, [&] { return hf; });
    } else {
        const auto& cq = std::get<CoupledTopQuench>(spec);
        ws.j_phase = static_cast<double>(cq.j);
        CoupledTopSpec pre(cq.j, cq.xi0);
        ws.iso = coupled_top_sector_isometry(pre, 1, 1);
        ws.psi0 = prepare_ground_state(pre, cache);
        auto key = fmt_key("ct|V++|j=%ld|xi=%.17g", cq.j, cq.xi1);
        hf = coupled_top_sector_matrix(CoupledTopSpec(cq.j, cq.xi1), 1, 1);
        ws.eig = eigensolve_cached(key, cache, [&] { return hf; });
    }

    ws.overlaps.amplitudes = ws.eig.vectors.adjoint() * ws.psi0;
    ws.overlaps.probabilities = ws.overlaps.amplitudes.cwiseAbs2();
    ws.overlaps.mean_energy = (ws.psi0.adjoint() * hf * ws.psi0)(0).real();
    return ws;
}

DiagonalEnsemble diagonal_ensemble(const OverlapProfile& overlaps, const EigenSystem& eig,
                                   double degeneracy_tol)
{
    if (std::abs(overlaps.probabilities.sum() - 1.0) > 1e-10)
        throw std::invalid_argument("diagonal_ensemble: overlaps not normalized");
    if (degeneracy_tol <= 0.0) degeneracy_tol = default_degeneracy_tol(eig.values);

    DiagonalEnsemble de;
    de.degeneracy_tol = degeneracy_tol;
    de.clusters = cluster_levels(eig.values, degeneracy_tol);
    const Eigen::Index d = eig.dim();
    de.rho = Matrix::Zero(d, d);
    for (const auto& cluster : de.clusters) {
        Vector u = Vector::Zero(d);
        for (Eigen::Index n : cluster) u += overlaps.amplitudes(n) * eig.vectors.col(n);
        de.rho.noalias() += u * u.adjoint();
    }
    return de;
}

namespace {

Matrix reshape_to_matrix(const Vector& full, Eigen::Index d)
{
    Matrix m(d, d);
    for (Eigen::Index i1 = 0; i1 < d; ++i1)
        for (Eigen::Index i2 = 0; i2 < d; ++i2) m(i1, i2) = full(i1 * d + i2);
    return m;
}

} // namespace

HusimiField evolved_husimi(const QuenchWorkspace& ws, double t, GridPtr grid,
                           bool override_grid_check)
{
    Vector phases(ws.eig.dim());
    for (Eigen::Index n = 0; n < ws.eig.dim(); ++n)
        phases(n) = std::exp(cxd(0.0, -ws.eig.values(n) * t)) * ws.overlaps.amplitudes(n);
    Vector psi_t = ws.eig.vectors * phases;
    Vector full = ws.iso.embed(psi_t);

    if (std::holds_alternative<LipkinQuench>(ws.spec)) {
        full /= full.norm();
        return husimi_field(StateRows::from_state(ws.j_phase, full), std::move(grid), override_grid_check);
    }
    const Eigen::Index d = 2 * static_cast<Eigen::Index>(ws.j_phase) + 1;
    Matrix m = reshape_to_matrix(full, d);
    Matrix rho1 = m * m.adjoint();
    rho1 /= rho1.trace().real();
    return husimi_field(StateRows::from_density(ws.j_phase, rho1), std::move(grid), override_grid_check);
}

HusimiField averaged_husimi(const QuenchWorkspace& ws, GridPtr grid,
                            bool override_grid_check, double truncation_mass)
{
    const double tol = default_degeneracy_tol(ws.eig.values);
    auto clusters = cluster_levels(ws.eig.values, tol);

    // one row per eigenvalue cluster: u_C = sum_{n in C} c_n |E_n>
    struct Row {
        Vector u;
        double weight;
    };
    std::vector<Row> rows;
    rows.reserve(clusters.size());
    for (const auto& cluster : clusters) {
        Vector u = Vector::Zero(ws.eig.dim());
        for (Eigen::Index n : cluster) u += ws.overlaps.amplitudes(n) * ws.eig.vectors.col(n);
        double w = u.squaredNorm();
        if (w > 0.0) rows.push_back({std::move(u), w});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.weight > b.weight; });
    double mass = 0.0;
    std::size_t keep = 0;
    while (keep < rows.size() && mass < 1.0 - truncation_mass) mass += rows[keep++].weight;

    if (std::holds_alternative<LipkinQuench>(ws.spec)) {
        Matrix cols(ws.iso.full_dim, static_cast<Eigen::Index>(keep));
        RVector w = RVector::Ones(static_cast<Eigen::Index>(keep));
        for (std::size_t r = 0; r < keep; ++r)
            cols.col(static_cast<Eigen::Index>(r)) = ws.iso.embed(rows[r].u);
        return husimi_field(StateRows::from_weighted_states(ws.j_phase, cols, w),
                            std::move(grid), override_grid_check);
    }

    const Eigen::Index d = 2 * static_cast<Eigen::Index>(ws.j_phase) + 1;
    Matrix rho1 = Matrix::Zero(d, d);
    for (std::size_t r = 0; r < keep; ++r) {
        Matrix m = reshape_to_matrix(ws.iso.embed(rows[r].u), d);
        rho1.noalias() += m * m.adjoint();
    }
    rho1 /= rho1.trace().real();
    return husimi_field(StateRows::from_density(ws.j_phase, rho1), std::move(grid), override_grid_check);
}

namespace {

Eigen::Index spin_dim_from_square(const Matrix& rho, long j)
{
    Eigen::Index d = 2 * j + 1;
    if (rho.rows() != rho.cols() || rho.rows() != d * d)
        throw std::invalid_argument("partial_trace: operator dimension is not (2j+1)^2");
    return d;
}

} // namespace

Matrix partial_trace_first(const Matrix& rho_full, long j)
{
    Eigen::Index d = spin_dim_from_square(rho_full, j);
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index ap = 0; ap < d; ++ap) {
            cxd s = 0.0;
            for (Eigen::Index b = 0; b < d; ++b) s += rho_full(a * d + b, ap * d + b);
            out(a, ap) = s;
        }
    return out;
}

Matrix partial_trace_second(const Matrix& rho_full, long j)
{
    Eigen::Index d = spin_dim_from_square(rho_full, j);
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b)
        for (Eigen::Index bp = 0; bp < d; ++bp) {
            cxd s = 0.0;
            for (Eigen::Index a = 0; a < d; ++a) s += rho_full(a * d + b, a * d + bp);
            out(b, bp) = s;
        }
    return out;
}

double post_quench_energy(const QuenchWorkspace& ws)
{
    return ws.overlaps.probabilities.dot(ws.eig.values);
}

} // namespace esq
