#include "esq/crit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esq {

double lipkin_critical_eta(double kappa)
{
    if (kappa <= 0.0 || kappa >= 0.8)
        throw std::invalid_argument("lipkin_critical_eta: formula valid for 0 < kappa < 4/5");
    return 2.0 - 2.5 * kappa;
}

double coupled_top_critical_xi1(double xi0)
{
    if (xi0 <= 1.0) throw std::invalid_argument("coupled_top_critical_xi1: requires xi0 > 1");
    return 2.0 * xi0 / (xi0 + 1.0);
}

double ct_energy_surface(const SurfacePoint& x, double xi)
{
    double r1 = x.p1 * x.p1 + x.q1 * x.q1;
    double r2 = x.p2 * x.p2 + x.q2 * x.q2;
    if (r1 > 4.0 || r2 > 4.0)
        throw std::invalid_argument("ct_energy_surface: point outside the phase-space domain");
    return 0.5 * r1 + 0.5 * r2 - 2.0 +
           0.25 * xi * x.q1 * x.q2 * std::sqrt(4.0 - r1) * std::sqrt(4.0 - r2);
}

void ct_energy_gradient(const SurfacePoint& x, double xi, double grad[4])
{
    double r1 = x.p1 * x.p1 + x.q1 * x.q1;
    double r2 = x.p2 * x.p2 + x.q2 * x.q2;
    double s1 = std::sqrt(4.0 - r1), s2 = std::sqrt(4.0 - r2);
    double c = 0.25 * xi;
    grad[0] = x.p1 - c * x.q1 * x.q2 * s2 * x.p1 / s1;
    grad[1] = x.q1 + c * x.q2 * s2 * (s1 - x.q1 * x.q1 / s1);
    grad[2] = x.p2 - c * x.q1 * x.q2 * s1 * x.p2 / s2;
    grad[3] = x.q2 + c * x.q1 * s1 * (s2 - x.q2 * x.q2 / s2);
}

std::vector<FixedPoint> ct_fixed_points(double xi)
{
    if (xi < 0.0) throw std::invalid_argument("ct_fixed_points: xi must be >= 0");
    if (xi <= 1.0) return {{SurfacePoint{}, -2.0}};
    double qf = std::sqrt(2.0 * (xi - 1.0) / xi);
    double em = -(xi + 1.0 / xi);
    return {{SurfacePoint{0.0, qf, 0.0, -qf}, em}, {SurfacePoint{0.0, -qf, 0.0, qf}, em}};
}

namespace {

// Backtracking gradient descent; the surface is smooth and the minima are
// strongly curved, so this reaches ~1e-12 gradient norms quickly.
FixedPoint descend(SurfacePoint x, double xi)
{
    double g[4];
    double e = ct_energy_surface(x, xi);
    for (int iter = 0; iter < 20000; ++iter) {
        ct_energy_gradient(x, xi, g);
        double gnorm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
        if (gnorm < 1e-13) break;
        double step = 0.5;
        for (int bt = 0; bt < 60; ++bt) {
            SurfacePoint y{x.p1 - step * g[0], x.q1 - step * g[1],
                           x.p2 - step * g[2], x.q2 - step * g[3]};
            if (y.p1 * y.p1 + y.q1 * y.q1 < 4.0 && y.p2 * y.p2 + y.q2 * y.q2 < 4.0) {
                double ey = ct_energy_surface(y, xi);
                if (ey < e - 1e-4 * step * gnorm * gnorm) {
                    x = y;
                    e = ey;
                    break;
                }
            }
            step *= 0.5;
        }
    }

    // descent stalls near sqrt(eps) position accuracy once energy decreases
    // fall below roundoff; a few Newton steps on the gradient finish the job
    for (int it = 0; it < 8; ++it) {
        ct_energy_gradient(x, xi, g);
        Eigen::Vector4d gv(g[0], g[1], g[2], g[3]);
        if (gv.lpNorm<Eigen::Infinity>() < 1e-14) break;
        Eigen::Matrix4d h;
        const double fd = 1e-6;
        double* coords[4] = {&x.p1, &x.q1, &x.p2, &x.q2};
        for (int c = 0; c < 4; ++c) {
            double saved = *coords[c], gp[4], gm[4];
            *coords[c] = saved + fd;
            ct_energy_gradient(x, xi, gp);
            *coords[c] = saved - fd;
            ct_energy_gradient(x, xi, gm);
            *coords[c] = saved;
            for (int rr = 0; rr < 4; ++rr) h(rr, c) = (gp[rr] - gm[rr]) / (2.0 * fd);
        }
        Eigen::Vector4d dx = h.fullPivLu().solve(gv);
        x.p1 -= dx(0);
        x.q1 -= dx(1);
        x.p2 -= dx(2);
        x.q2 -= dx(3);
    }
    return {x, ct_energy_surface(x, xi)};
}

} // namespace

std::vector<FixedPoint> ct_fixed_points_numeric(double xi)
{
    const SurfacePoint starts[] = {
        {0.0, 1.2, 0.0, -1.2}, {0.0, -1.2, 0.0, 1.2},
        {0.1, 0.4, -0.1, -0.3}, {0.0, 0.05, 0.0, 0.05}, {0.3, -0.6, 0.2, 0.7},
    };
    std::vector<FixedPoint> found;
    for (const auto& s : starts) {
        FixedPoint fp = descend(s, xi);
        bool dup = false;
        for (const auto& other : found) {
            double d = std::abs(fp.x.p1 - other.x.p1) + std::abs(fp.x.q1 - other.x.q1) +
                       std::abs(fp.x.p2 - other.x.p2) + std::abs(fp.x.q2 - other.x.q2);
            if (d < 1e-6) dup = true;
        }
        if (!dup) found.push_back(fp);
    }
    std::sort(found.begin(), found.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.energy < b.energy; });
    // keep only global minima (within rounding)
    std::vector<FixedPoint> minima;
    for (const auto& fp : found)
        if (fp.energy < found.front().energy + 1e-9) minima.push_back(fp);
    return minima;
}

double ct_quench_energy(double xi0, double xi1)
{
    if (xi0 <= 1.0) throw std::invalid_argument("ct_quench_energy: requires xi0 > 1");
    return (xi0 - 1.0) * (2.0 * xi0 - xi1 * (xi0 + 1.0)) / (xi0 * xi0) - 2.0;
}

ScanCurve MeasureScan::curve(const std::string& parameter, const std::string& measure) const
{
    ScanCurve c;
    c.parameter = parameter;
    c.measure = measure;
    c.params = params;
    c.values.reserve(measures.size());
    for (const auto& m : measures) {
        double v;
        if (measure == "M2") v = m.m2;
        else if (measure == "W") v = m.w;
        else if (measure == "M2_q") v = m.m2_q;
        else if (measure == "M2_p") v = m.m2_p;
        else if (measure == "W_q") v = m.w_q;
        else if (measure == "W_p") v = m.w_p;
        else throw std::invalid_argument("ScanCurve: unknown measure " + measure);
        c.values.push_back(v);
    }
    return c;
}

namespace {

void check_scan_params(const std::vector<double>& params)
{
    if (params.size() < 2)
        throw std::invalid_argument("measure_scan: need at least 2 parameter points");
    for (std::size_t i = 1; i < params.size(); ++i)
        if (params[i] <= params[i - 1])
            throw std::invalid_argument("measure_scan: parameter values must be strictly increasing");
}

GridPtr scan_grid(double j, const ScanOptions& opt)
{
    if (opt.grid_radial > 0 && opt.grid_angular > 0)
        return std::make_shared<const PhaseSpaceGrid>(build_polar_grid(opt.grid_radial, opt.grid_angular));
    return mandated_grid(j);
}

LocalizationMeasures scan_point_measures(const HusimiField& field, const ScanOptions& opt)
{
    if (opt.with_marginals) return localization_measures(field);
    LocalizationMeasures lm;
    lm.m2 = second_moment(field);
    lm.w = wehrl_entropy(field);
    return lm;
}

} // namespace

MeasureScan lipkin_measure_scan(long n_particles, double kappa, const std::vector<double>& etas,
                                const ScanOptions& opt, EigCache* cache)
{
    check_scan_params(etas);
    GridPtr grid = scan_grid(0.5 * static_cast<double>(n_particles), opt);
    MeasureScan out;
    out.params = etas;
    for (double eta : etas) {
        auto ws = prepare_quench(LipkinQuench(n_particles, kappa, eta), cache);
        auto field = averaged_husimi(ws, grid, opt.override_grid_check);
        out.measures.push_back(scan_point_measures(field, opt));
    }
    return out;
}

MeasureScan ct_measure_scan(long j, double xi0, const std::vector<double>& xi1s,
                            const ScanOptions& opt, EigCache* cache)
{
    check_scan_params(xi1s);
    GridPtr grid = scan_grid(static_cast<double>(j), opt);
    MeasureScan out;
    out.params = xi1s;
    for (double xi1 : xi1s) {
        auto ws = prepare_quench(CoupledTopQuench(j, xi0, xi1), cache);
        auto field = averaged_husimi(ws, grid, opt.override_grid_check);
        out.measures.push_back(scan_point_measures(field, opt));
    }
    return out;
}

ScalingFit scaling_fit(const std::vector<double>& sizes, const std::vector<double>& values,
                       ScalingFit::Model model)
{
    if (sizes.size() != values.size() || sizes.size() < 3)
        throw std::invalid_argument("scaling_fit: need >= 3 matched sizes");
    std::vector<double> x(sizes.size()), y(values.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] <= 0.0) throw std::invalid_argument("scaling_fit: sizes must be positive");
        x[i] = std::log(sizes[i]);
        if (model == ScalingFit::Model::power) {
            if (values[i] <= 0.0)
                throw std::invalid_argument("scaling_fit: power-law fit needs positive values");
            y[i] = std::log(values[i]);
        } else {
            y[i] = values[i];
        }
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0, ymean = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double fit = slope * x[i] + intercept;
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - ymean) * (y[i] - ymean);
    }
    ScalingFit out;
    out.model = model;
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (model == ScalingFit::Model::power) {
        out.exponent = -slope;  // y ~ a x^-gamma
        out.prefactor = std::exp(intercept);
    } else {
        out.exponent = slope;  // y ~ gamma ln x + b
        out.prefactor = intercept;
    }
    return out;
}

namespace {

// Vertex of the parabola through three points (non-uniform spacing allowed).
double parabola_vertex(double xl, double yl, double xc, double yc, double xr, double yr)
{
    double a = xc - xl, b = xc - xr;
    double num = a * a * (yc - yr) - b * b * (yc - yl);
    double den = a * (yc - yr) - b * (yc - yl);
    if (den == 0.0) return xc;
    return xc - 0.5 * num / den;
}

} // namespace

CriticalEstimate estimate_critical_extremum(const ScanCurve& curve, bool maximum)
{
    const auto& x = curve.params;
    const auto& y = curve.values;
    if (x.size() < 3) throw std::invalid_argument("estimate_critical_extremum: need >= 3 points");
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (maximum ? y[i] > y[best] : y[i] < y[best]) best = i;
    if (best == 0 || best + 1 == y.size())
        throw std::runtime_error("estimate_critical_extremum: extremum at scan boundary; widen the scan");

    CriticalEstimate est;
    est.location = parabola_vertex(x[best - 1], y[best - 1], x[best], y[best], x[best + 1], y[best + 1]);
    est.uncertainty = 0.5 * (x[best + 1] - x[best - 1]);
    est.method = std::string(maximum ? "maximum-of-" : "minimum-of-") + curve.measure;
    return est;
}

CriticalEstimate estimate_critical_exponent_drop(const std::vector<double>& params,
                                                 const std::vector<double>& nu)
{
    if (params.size() != nu.size() || params.size() < 10)
        throw std::invalid_argument("estimate_critical_exponent_drop: need >= 10 matched points");
    const std::size_t n = params.size();
    std::vector<double> d(n);
    d[0] = (nu[1] - nu[0]) / (params[1] - params[0]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (nu[i + 1] - nu[i - 1]) / (params[i + 1] - params[i - 1]);
    d[n - 1] = (nu[n - 1] - nu[n - 2]) / (params[n - 1] - params[n - 2]);

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (d[i] < d[best]) best = i;
    if (best == 0 || best + 1 == n)
        throw std::runtime_error("estimate_critical_exponent_drop: minimum at scan boundary");

    CriticalEstimate est;
    est.location = parabola_vertex(params[best - 1], d[best - 1], params[best], d[best],
                                   params[best + 1], d[best + 1]);
    est.uncertainty = 0.5 * (params[best + 1] - params[best - 1]);
    est.method = "min-of-dnu/dparameter";
    return est;
}

} // namespace esq
