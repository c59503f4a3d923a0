#include "esq/husimi.hpp"
#include "esq/kernels.hpp"
#include "esq/util.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace esq {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<Eigen::Index> nonzero_support(const Matrix& cols)
{
    std::vector<Eigen::Index> supp;
    for (Eigen::Index k = 0; k < cols.rows(); ++k) {
        bool nz = false;
        for (Eigen::Index c = 0; c < cols.cols() && !nz; ++c)
            nz = cols(k, c) != cxd(0.0, 0.0);
        if (nz) supp.push_back(k);
    }
    return supp;
}

} // namespace

double StateRows::trace() const
{
    double t = 0.0;
    for (Eigen::Index r = 0; r < nrows(); ++r)
        t += re.row(r).squaredNorm() + im.row(r).squaredNorm();
    return t;
}

StateRows StateRows::from_state(double j, const Vector& psi)
{
    long twoj = require_half_integer(j, "StateRows");
    if (psi.size() != twoj + 1)
        throw std::invalid_argument("StateRows::from_state: dimension does not match j");
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("StateRows::from_state: state is not unit-norm");

    StateRows sr;
    sr.j = j;
    sr.support = nonzero_support(psi);
    const Eigen::Index ns = static_cast<Eigen::Index>(sr.support.size());
    sr.re.resize(1, ns);
    sr.im.resize(1, ns);
    for (Eigen::Index s = 0; s < ns; ++s) {
        sr.re(0, s) = psi(sr.support[s]).real();
        sr.im(0, s) = psi(sr.support[s]).imag();
    }
    return sr;
}

StateRows StateRows::from_density(double j, const Matrix& rho)
{
    long twoj = require_half_integer(j, "StateRows");
    if (rho.rows() != twoj + 1 || rho.cols() != twoj + 1)
        throw std::invalid_argument("StateRows::from_density: dimension does not match j");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-10)
        throw std::invalid_argument("StateRows::from_density: operator is not unit-trace");
    if (hermiticity_residual(rho) > 1e-10)
        throw std::invalid_argument("StateRows::from_density: operator is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("StateRows::from_density: operator is not positive semidefinite");

    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) > 1e-16) keep.push_back(k);

    Matrix cols(rho.rows(), static_cast<Eigen::Index>(keep.size()));
    RVector w(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        cols.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
        w(static_cast<Eigen::Index>(i)) = es.eigenvalues()(keep[i]);
    }
    return from_weighted_states(j, cols, w);
}

StateRows StateRows::from_weighted_states(double j, const Matrix& cols, const RVector& weights)
{
    long twoj = require_half_integer(j, "StateRows");
    if (cols.rows() != twoj + 1)
        throw std::invalid_argument("StateRows::from_weighted_states: dimension does not match j");
    if (cols.cols() != weights.size())
        throw std::invalid_argument("StateRows::from_weighted_states: weight count mismatch");
    if (weights.size() > 0 && weights.minCoeff() < 0.0)
        throw std::invalid_argument("StateRows::from_weighted_states: negative weight");

    StateRows sr;
    sr.j = j;
    sr.support = nonzero_support(cols);
    const Eigen::Index ns = static_cast<Eigen::Index>(sr.support.size());
    sr.re.resize(cols.cols(), ns);
    sr.im.resize(cols.cols(), ns);
    for (Eigen::Index r = 0; r < cols.cols(); ++r) {
        double sw = std::sqrt(weights(r));
        for (Eigen::Index s = 0; s < ns; ++s) {
            cxd v = sw * cols(sr.support[s], r);
            sr.re(r, s) = v.real();
            sr.im(r, s) = v.imag();
        }
    }
    return sr;
}

namespace {

// Q at one arbitrary point; lb is the half-log binomial table for rows.j.
double eval_point(const StateRows& rows, const std::vector<double>& lb, const PhasePoint& pt)
{
    const double u = 0.25 * pt.radius2();
    if (u >= 1.0) throw std::invalid_argument("husimi: point outside the disk");
    const double phi = std::atan2(-pt.p, pt.q);
    const double lu = u > 0.0 ? std::log(u) : 0.0;
    const double l1 = std::log1p(-u);
    const std::size_t ns = rows.support.size();
    std::vector<double> zr(ns), zi(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        double k = static_cast<double>(rows.support[s]);
        double mag;
        if (u == 0.0)
            mag = (rows.support[s] == 0) ? 1.0 : 0.0;
        else
            mag = std::exp(lb[rows.support[s]] + 0.5 * k * (lu - l1) + rows.j * l1);
        zr[s] = mag * std::cos(k * phi);
        zi[s] = -mag * std::sin(k * phi);
    }
    return kernels::abs2_dot_rows(rows.re.data(), rows.im.data(),
                                  rows.nrows(), ns, rows.re.cols(), zr.data(), zi.data());
}

} // namespace

double husimi_at(const StateRows& rows, const PhasePoint& pt)
{
    return eval_point(rows, half_log_binomials(rows.j), pt);
}

HusimiField husimi_field(std::shared_ptr<const StateRows> rows, GridPtr grid,
                         bool override_grid_check)
{
    if (!rows || !grid) throw std::invalid_argument("husimi_field: null argument");
    const StateRows& sr = *rows;
    if (!grid->adequate_for(sr.j) && !override_grid_check)
        throw std::invalid_argument(
            "husimi_field: grid below the minimum resolution rule for this j "
            "(needs n_radial >= j+1 and n_angular >= 4j+2); pass override to force");

    HusimiField field;
    field.grid = grid;
    field.j = sr.j;
    field.source = rows;
    field.values.assign(grid->size(), 0.0);

    auto lb = half_log_binomials(sr.j);
    const std::size_t ns = sr.support.size();
    const Eigen::Index nr = sr.nrows();

    if (grid->scheme == GridScheme::polar_gauss) {
        // separable amplitudes: radial magnitude times e^{ik theta}
        // (arg zeta = -theta on this chart, amplitude phase is -k arg zeta)
        const int nang = grid->n_angular;
        RowMajor zr(nang, static_cast<Eigen::Index>(ns)), zi(nang, static_cast<Eigen::Index>(ns));
        for (int a = 0; a < nang; ++a) {
            double th = grid->theta[a];
            for (std::size_t s = 0; s < ns; ++s) {
                double k = static_cast<double>(sr.support[s]);
                zr(a, static_cast<Eigen::Index>(s)) = std::cos(k * th);
                zi(a, static_cast<Eigen::Index>(s)) = std::sin(k * th);
            }
        }
        parallel_for_each(static_cast<std::size_t>(grid->n_radial), [&](std::size_t ring) {
            const double u = grid->u[ring];
            const double lu = std::log(u), l1 = std::log1p(-u);
            std::vector<double> rl(ns);
            for (std::size_t s = 0; s < ns; ++s) {
                double k = static_cast<double>(sr.support[s]);
                rl[s] = std::exp(lb[sr.support[s]] + 0.5 * k * (lu - l1) + sr.j * l1);
            }
            RowMajor ar(nr, static_cast<Eigen::Index>(ns)), ai(nr, static_cast<Eigen::Index>(ns));
            for (Eigen::Index r = 0; r < nr; ++r)
                for (std::size_t s = 0; s < ns; ++s) {
                    ar(r, static_cast<Eigen::Index>(s)) = sr.re(r, static_cast<Eigen::Index>(s)) * rl[s];
                    ai(r, static_cast<Eigen::Index>(s)) = sr.im(r, static_cast<Eigen::Index>(s)) * rl[s];
                }
            double* out = field.values.data() + ring * static_cast<std::size_t>(nang);
            for (int a = 0; a < nang; ++a)
                out[a] = kernels::abs2_dot_rows(ar.data(), ai.data(), nr, ns, ns,
                                                zr.data() + static_cast<std::size_t>(a) * ns,
                                                zi.data() + static_cast<std::size_t>(a) * ns);
        });
    } else {
        parallel_for(grid->size(), [&](std::size_t i0, std::size_t i1) {
            for (std::size_t i = i0; i < i1; ++i)
                field.values[i] = eval_point(sr, lb, {grid->p[i], grid->q[i]});
        });
    }

    double norm = (2.0 * sr.j + 1.0) / (4.0 * M_PI) *
                  kernels::weighted_sum(grid->w.data(), field.values.data(), grid->size());
    field.norm_residual = std::abs(norm - 1.0);
    return field;
}

HusimiField husimi_field(const StateRows& rows, GridPtr grid, bool override_grid_check)
{
    return husimi_field(std::make_shared<const StateRows>(rows), std::move(grid), override_grid_check);
}

double HusimiField::max_value() const
{
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

double second_moment(const HusimiField& field)
{
    const auto& g = *field.grid;
    return (2.0 * field.j + 1.0) / (4.0 * M_PI) *
           kernels::weighted_sum_sq(g.w.data(), field.values.data(), g.size());
}

double wehrl_entropy(const HusimiField& field)
{
    const auto& g = *field.grid;
    return -(2.0 * field.j + 1.0) / (4.0 * M_PI) *
           kernels::weighted_xlogx(g.w.data(), field.values.data(), g.size());
}

std::pair<MarginalDistribution, MarginalDistribution>
marginals(const HusimiField& field, int n_axis, int n_chord)
{
    if (!field.source)
        throw std::invalid_argument("marginals: field carries no source state");
    const StateRows& rows = *field.source;
    long twoj = require_half_integer(field.j, "marginals");
    if (n_axis <= 0) n_axis = static_cast<int>(twoj) + 2;
    if (n_chord <= 0) n_chord = static_cast<int>(twoj) + 2;

    auto lb = half_log_binomials(field.j);
    const double sqc = std::sqrt((2.0 * field.j + 1.0) / (4.0 * M_PI));

    auto make = [&](char axis) {
        MarginalDistribution m;
        m.axis = axis;
        m.j = field.j;
        gauss_legendre(n_axis, -2.0, 2.0, m.nodes, m.gl_weights);
        m.values.assign(n_axis, 0.0);
        parallel_for_each(static_cast<std::size_t>(n_axis), [&](std::size_t i) {
            double x = m.nodes[i];
            double half_chord = std::sqrt(std::max(0.0, 4.0 - x * x));
            std::vector<double> cn, cw;
            gauss_legendre(n_chord, -half_chord, half_chord, cn, cw);
            KahanSum acc;
            for (int k = 0; k < n_chord; ++k) {
                PhasePoint pt = (axis == 'q') ? PhasePoint{cn[k], x} : PhasePoint{x, cn[k]};
                acc.add(cw[k] * eval_point(rows, lb, pt));
            }
            m.values[i] = sqc * acc.value();
        });
        KahanSum norm;
        for (int i = 0; i < n_axis; ++i) norm.add(m.gl_weights[i] * m.values[i]);
        m.norm_residual = std::abs(sqc * norm.value() - 1.0);
        return m;
    };
    return {make('q'), make('p')};
}

MarginalMeasures marginal_measures(const MarginalDistribution& mq, const MarginalDistribution& mp)
{
    auto one = [](const MarginalDistribution& m, double& m2, double& w) {
        double sqc = std::sqrt((2.0 * m.j + 1.0) / (4.0 * M_PI));
        KahanSum s2, se;
        for (std::size_t i = 0; i < m.values.size(); ++i) {
            s2.add(m.gl_weights[i] * m.values[i] * m.values[i]);
            se.add(m.gl_weights[i] * xlogx(m.values[i]));
        }
        m2 = sqc * s2.value();
        w = -sqc * se.value();
    };
    MarginalMeasures out;
    one(mq, out.m2_q, out.w_q);
    one(mp, out.m2_p, out.w_p);
    return out;
}

LocalizationMeasures localization_measures(const HusimiField& field, int n_axis, int n_chord)
{
    LocalizationMeasures lm;
    lm.m2 = second_moment(field);
    lm.w = wehrl_entropy(field);
    auto [mq, mp] = marginals(field, n_axis, n_chord);
    auto mm = marginal_measures(mq, mp);
    lm.m2_q = mm.m2_q;
    lm.m2_p = mm.m2_p;
    lm.w_q = mm.w_q;
    lm.w_p = mm.w_p;
    lm.delta_m2 = std::abs(lm.m2 - lm.m2_p * lm.m2_q);
    lm.delta_w = std::abs(lm.w - (lm.w_p + lm.w_q));
    return lm;
}

int superlevel_components(const HusimiField& field, double frac)
{
    const auto& g = *field.grid;
    if (g.scheme != GridScheme::polar_gauss)
        throw std::invalid_argument("superlevel_components: polar grid required");
    const double cut = frac * field.max_value();
    const int nr = g.n_radial, na = g.n_angular;

    std::vector<int> parent(g.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    auto on = [&](int i) { return field.values[static_cast<std::size_t>(i)] >= cut; };
    for (int r = 0; r < nr; ++r)
        for (int a = 0; a < na; ++a) {
            int i = r * na + a;
            if (!on(i)) continue;
            int right = r * na + (a + 1) % na;
            if (on(right)) unite(i, right);
            if (r + 1 < nr) {
                int up = (r + 1) * na + a;
                if (on(up)) unite(i, up);
            }
        }
    // nodes in the innermost ring are mutually close; stitch them through
    // the ring-neighbour links already added
    std::vector<char> seen(g.size(), 0);
    int comps = 0;
    for (int i = 0; i < static_cast<int>(g.size()); ++i)
        if (on(i)) {
            int root = find(i);
            if (!seen[root]) {
                seen[root] = 1;
                ++comps;
            }
        }
    return comps;
}

} // namespace esq
