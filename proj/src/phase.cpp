#include "esq/phase.hpp"
#include "esq/util.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace esq {

cxd zeta_from_pq(const PhasePoint& pt)
{
    double r2 = pt.radius2();
    if (r2 >= 4.0)
        throw std::invalid_argument("zeta_from_pq: point must lie strictly inside the disk p^2+q^2 < 4");
    return cxd(pt.q, -pt.p) / std::sqrt(4.0 - r2);
}

double PhaseSpaceGrid::weight_sum() const
{
    KahanSum s;
    for (double x : w) s.add(x);
    return s.value();
}

bool PhaseSpaceGrid::adequate_for(double j) const
{
    if (scheme != GridScheme::polar_gauss) return false;
    return n_radial >= static_cast<int>(std::ceil(j + 1.0)) &&
           n_angular >= static_cast<int>(std::ceil(4.0 * j + 2.0));
}

void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * k + 1.0) * z * p2 - k * p3) / (k + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[i] = xm - xl * z;
        nodes[n - 1 - i] = xm + xl * z;
        weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

PhaseSpaceGrid build_polar_grid(int n_radial, int n_angular)
{
    if (n_radial < 2 || n_angular < 4)
        throw std::invalid_argument("build_polar_grid: resolution too coarse");
    PhaseSpaceGrid g;
    g.scheme = GridScheme::polar_gauss;
    g.n_radial = n_radial;
    g.n_angular = n_angular;
    gauss_legendre(n_radial, 0.0, 1.0, g.u, g.wu);
    g.theta.resize(n_angular);
    for (int a = 0; a < n_angular; ++a) g.theta[a] = 2.0 * M_PI * a / n_angular;

    // dp dq = r dr dtheta = 2 du dtheta with u = (r/2)^2
    const double wtheta = 2.0 * M_PI / n_angular;
    g.p.reserve(static_cast<std::size_t>(n_radial) * n_angular);
    g.q.reserve(g.p.capacity());
    g.w.reserve(g.p.capacity());
    for (int i = 0; i < n_radial; ++i) {
        double r = 2.0 * std::sqrt(g.u[i]);
        double wr = 2.0 * g.wu[i] * wtheta;
        for (int a = 0; a < n_angular; ++a) {
            g.p.push_back(r * std::sin(g.theta[a]));
            g.q.push_back(r * std::cos(g.theta[a]));
            g.w.push_back(wr);
        }
    }
    return g;
}

PhaseSpaceGrid build_cartesian_grid(double spacing)
{
    if (spacing <= 0.0 || spacing > 0.5)
        throw std::invalid_argument("build_cartesian_grid: spacing must lie in (0, 0.5]");
    PhaseSpaceGrid g;
    g.scheme = GridScheme::cartesian_masked;
    g.spacing = spacing;
    const int n = static_cast<int>(std::ceil(4.0 / spacing));
    double raw_sum = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            double q = -2.0 + (ix + 0.5) * spacing;
            double p = -2.0 + (iy + 0.5) * spacing;
            if (p * p + q * q >= 4.0 - 1e-12) continue;
            g.p.push_back(p);
            g.q.push_back(q);
            g.w.push_back(spacing * spacing);
            raw_sum += spacing * spacing;
        }
    // Rescale so the disk area is represented exactly; this grid is meant
    // for image export, not precision quadrature.
    const double scale = 4.0 * M_PI / raw_sum;
    for (double& x : g.w) x *= scale;
    return g;
}

GridPtr mandated_grid(double j)
{
    long twoj = require_half_integer(j, "mandated_grid");
    int nr = static_cast<int>(twoj) + 2;
    int na = 2 * static_cast<int>(twoj) + 4;
    return std::make_shared<const PhaseSpaceGrid>(build_polar_grid(nr, na));
}

std::vector<double> half_log_binomials(double j)
{
    long twoj = require_half_integer(j, "half_log_binomials");
    std::vector<double> lb(twoj + 1);
    double lg2j = std::lgamma(static_cast<double>(twoj) + 1.0);
    for (long k = 0; k <= twoj; ++k)
        lb[k] = 0.5 * (lg2j - std::lgamma(static_cast<double>(k) + 1.0) -
                       std::lgamma(static_cast<double>(twoj - k) + 1.0));
    return lb;
}

CoherentAmplitudes coherent_amplitudes(double j, const PhasePoint& pt)
{
    long twoj = require_half_integer(j, "coherent_amplitudes");
    double r2 = pt.radius2();
    if (r2 >= 4.0)
        throw std::invalid_argument("coherent_amplitudes: point must lie strictly inside the disk");

    const double u = 0.25 * r2;
    const double phi = std::atan2(-pt.p, pt.q);  // arg(zeta)
    const double lu = u > 0.0 ? std::log(u) : 0.0;
    const double l1 = std::log1p(-u);
    auto lb = half_log_binomials(j);

    CoherentAmplitudes amp;
    amp.j = j;
    amp.log_mag.resize(twoj + 1);
    amp.phase.resize(twoj + 1);
    for (long k = 0; k <= twoj; ++k) {
        double lm;
        if (u == 0.0)
            lm = (k == 0) ? 0.0 : -std::numeric_limits<double>::infinity();
        else
            lm = lb[k] + 0.5 * k * (lu - l1) + j * l1;
        if (lm > 700.0)
            throw std::overflow_error("coherent_amplitudes: log-magnitude exceeds representable range");
        amp.log_mag[k] = lm;
        amp.phase[k] = -static_cast<double>(k) * phi;
    }
    return amp;
}

Vector CoherentAmplitudes::vector() const
{
    Vector v(static_cast<Eigen::Index>(log_mag.size()));
    for (std::size_t k = 0; k < log_mag.size(); ++k) {
        double mag = std::exp(log_mag[k]);
        v(static_cast<Eigen::Index>(k)) = mag * cxd(std::cos(phase[k]), std::sin(phase[k]));
    }
    return v;
}

Vector coherent_state(double j, const PhasePoint& pt)
{
    return coherent_amplitudes(j, pt).vector();
}

double closure_residual(const PhaseSpaceGrid& grid, double j)
{
    long twoj = require_half_integer(j, "closure_residual");
    const Eigen::Index d = twoj + 1;
    Matrix acc = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Vector z = coherent_state(j, {grid.p[i], grid.q[i]});
        acc.noalias() += grid.w[i] * (z * z.adjoint());
    }
    acc *= (2.0 * j + 1.0) / (4.0 * M_PI);
    acc -= Matrix::Identity(d, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es(acc, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace esq
