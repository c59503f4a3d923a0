#include "esq/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esq {

LipkinSpec::LipkinSpec(long n, double kappa_) : n_particles(n), kappa(kappa_)
{
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("LipkinSpec: N must be even and >= 2");
    if (kappa < 0.0 || kappa > 1.0) throw std::invalid_argument("LipkinSpec: kappa must lie in [0, 1]");
}

CoupledTopSpec::CoupledTopSpec(long j_, double xi_) : j(j_), xi(xi_)
{
    if (j < 1) throw std::invalid_argument("CoupledTopSpec: j must be a positive integer");
    if (xi < 0.0) throw std::invalid_argument("CoupledTopSpec: xi must be >= 0");
}

SectorIsometry lipkin_sector_isometry(const LipkinSpec& spec, int parity)
{
    return build_sector(SpinBasis(spec.j()), parity);
}

HermitianOperator lipkin_hamiltonian(const LipkinSpec& spec, LipkinSector sector)
{
    SpinBasis basis(spec.j());
    auto ops = build_collective_ops(basis);
    const double n = static_cast<double>(spec.n_particles);
    Matrix h = -(4.0 * (1.0 - spec.kappa) / n) * (ops.jx.mat * ops.jx.mat) +
               spec.kappa * (ops.jz.mat + 0.5 * n * Matrix::Identity(basis.dim(), basis.dim()));
    if (sector == LipkinSector::full) return {h, BasisId::spin(basis.j)};
    auto iso = build_sector(basis, sector == LipkinSector::even ? 1 : -1);
    return {iso.project_operator(h), BasisId::spin(basis.j)};
}

namespace {

// <a|Jx|b> in the m-ascending basis, nonzero only for a = b +/- 1.
double jx_element(double j, Eigen::Index a, Eigen::Index b)
{
    double m = -j + static_cast<double>(b);
    if (a == b + 1) return 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    if (a == b - 1) return 0.5 * std::sqrt(j * (j + 1.0) - m * (m - 1.0));
    return 0.0;
}

// <i1p,i2p|H_ct|i1,i2> from the sparse structure of the Hamiltonian.
double ct_element(const CoupledTopSpec& spec, Eigen::Index i1p, Eigen::Index i2p,
                  Eigen::Index i1, Eigen::Index i2)
{
    const double j = static_cast<double>(spec.j);
    double v = 0.0;
    if (i1p == i1 && i2p == i2) v += (-j + i1) + (-j + i2);
    if (std::abs(i1p - i1) == 1 && std::abs(i2p - i2) == 1)
        v += (spec.xi / j) * jx_element(j, i1p, i1) * jx_element(j, i2p, i2);
    return v;
}

} // namespace

SectorIsometry coupled_top_sector_isometry(const CoupledTopSpec& spec, int parity, int permutation)
{
    SpinBasis b(static_cast<double>(spec.j));
    return build_sector(TensorBasis(b, b), parity, permutation);
}

Matrix coupled_top_sector_matrix(const CoupledTopSpec& spec, int parity, int permutation)
{
    auto iso = coupled_top_sector_isometry(spec, parity, permutation);
    const Eigen::Index d2 = 2 * spec.j + 1;
    const Eigen::Index d = iso.sector_dim();
    Matrix h(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            double s = 0.0;
            for (auto& [ra, ca] : iso.cols[a])
                for (auto& [rb, cb] : iso.cols[b])
                    s += ca * cb * ct_element(spec, ra / d2, ra % d2, rb / d2, rb % d2);
            h(a, b) = s;
        }
    return h;
}

HermitianOperator coupled_top_hamiltonian(const CoupledTopSpec& spec, CtSector sector)
{
    const double j = static_cast<double>(spec.j);
    if (sector == CtSector::vpp)
        return {coupled_top_sector_matrix(spec, 1, 1), BasisId::tensor(j, j)};

    SpinBasis b(j);
    TensorBasis tb(b, b);
    auto ops = build_collective_ops(b);
    Matrix j1z = tensor_embed(ops.jz.mat, 1, tb);
    Matrix j2z = tensor_embed(ops.jz.mat, 2, tb);
    Matrix j1x = tensor_embed(ops.jx.mat, 1, tb);
    Matrix j2x = tensor_embed(ops.jx.mat, 2, tb);
    Matrix h = j1z + j2z + (spec.xi / j) * (j1x * j2x);
    return {h, BasisId::tensor(j, j)};
}

SpectrumHistogram density_of_states(std::vector<double> levels, double axis_scale,
                                    double rescale_norm, int bins, double smoothing_width)
{
    if (levels.size() < 100)
        throw std::invalid_argument("density_of_states: need at least 100 levels");
    if (bins == 0) bins = static_cast<int>(std::lround(std::sqrt(static_cast<double>(levels.size()))));
    if (bins < 10) throw std::invalid_argument("density_of_states: bins must be >= 10");

    for (double& e : levels) e *= axis_scale;
    std::sort(levels.begin(), levels.end());
    const double span = levels.back() - levels.front();
    if (span <= 0.0) throw std::invalid_argument("density_of_states: degenerate spectrum span");
    const double sigma = smoothing_width > 0.0 ? smoothing_width : span / bins;

    SpectrumHistogram hist;
    hist.level_count = static_cast<long>(levels.size());
    hist.smoothing_width = sigma;
    hist.rescale_norm = rescale_norm;

    const double lo = levels.front() - 5.0 * sigma;
    const double hi = levels.back() + 5.0 * sigma;
    const double dx = (hi - lo) / bins;
    hist.bin_edges.resize(bins + 1);
    hist.bin_centers.resize(bins);
    hist.density.assign(bins, 0.0);
    for (int b = 0; b <= bins; ++b) hist.bin_edges[b] = lo + b * dx;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    for (int b = 0; b < bins; ++b) {
        double c = lo + (b + 0.5) * dx;
        hist.bin_centers[b] = c;
        double s = 0.0;
        for (double e : levels) {
            double z = (c - e) / sigma;
            s += std::exp(-0.5 * z * z);
        }
        hist.density[b] = norm * s / rescale_norm;
    }
    return hist;
}

std::vector<double> dos_derivative(const SpectrumHistogram& hist)
{
    const auto& x = hist.bin_centers;
    const auto& y = hist.density;
    const std::size_t n = y.size();
    if (n < 3) throw std::invalid_argument("dos_derivative: too few bins");
    std::vector<double> d(n);
    d[0] = (y[1] - y[0]) / (x[1] - x[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
    d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    return d;
}

} // namespace esq
