#pragma once

#include "esq/husimi.hpp"
#include "esq/quench.hpp"

#include <string>
#include <vector>

namespace esq {

// eta_c = 2 - 5 kappa / 2, valid for 0 < kappa < 4/5.
double lipkin_critical_eta(double kappa);

// xi1_c = 2 xi0 / (xi0 + 1), valid for xi0 > 1; always in (1, 2).
double coupled_top_critical_xi1(double xi0);

struct SurfacePoint {
    double p1 = 0.0, q1 = 0.0, p2 = 0.0, q2 = 0.0;
};

// Rescaled coupled-top energy surface
// E = (p1^2+q1^2)/2 + (p2^2+q2^2)/2 - 2 + (xi/4) q1 q2 sqrt(4-p1^2-q1^2) sqrt(4-p2^2-q2^2)
double ct_energy_surface(const SurfacePoint& x, double xi);
// Analytic gradient of the surface.
void ct_energy_gradient(const SurfacePoint& x, double xi, double grad[4]);

struct FixedPoint {
    SurfacePoint x;
    double energy = 0.0;
};

// Closed-form minima: origin for xi <= 1; the antisymmetric pair
// q1 = -q2 = +/- sqrt(2(xi-1)/xi) with energy -(xi + 1/xi) for xi > 1.
std::vector<FixedPoint> ct_fixed_points(double xi);
// Gradient-descent cross-check from generic starts.
std::vector<FixedPoint> ct_fixed_points_numeric(double xi);

// Mean post-quench energy of the pre-quench ground state (semiclassical):
// E(xi0, xi1) = (xi0-1)(2 xi0 - xi1 (xi0+1)) / xi0^2 - 2, xi0 > 1.
double ct_quench_energy(double xi0, double xi1);

struct ScanCurve {
    std::string parameter;  // "eta" | "xi1" | "N" | "j"
    std::string measure;    // "M2" | "W" | ...
    std::vector<double> params;
    std::vector<double> values;
};

struct ScanOptions {
    bool with_marginals = false;
    bool override_grid_check = false;
    int grid_radial = 0;   // 0 = mandated resolution
    int grid_angular = 0;
};

struct MeasureScan {
    std::vector<double> params;
    std::vector<LocalizationMeasures> measures;

    ScanCurve curve(const std::string& parameter, const std::string& measure) const;
};

// Q-bar measures across a quench-parameter grid (>= 2 points spanning the
// scan; eigensystems are pulled from/pushed to the cache).
MeasureScan lipkin_measure_scan(long n_particles, double kappa, const std::vector<double>& etas,
                                const ScanOptions& opt = {}, EigCache* cache = nullptr);
MeasureScan ct_measure_scan(long j, double xi0, const std::vector<double>& xi1s,
                            const ScanOptions& opt = {}, EigCache* cache = nullptr);

struct ScalingFit {
    enum class Model { power, log } model = Model::power;
    double exponent = 0.0;   // gamma: y ~ x^-gamma (power) or y ~ gamma ln x + b (log)
    double prefactor = 0.0;  // a (power) or b (log)
    double r_squared = 0.0;
};

// Least squares of ln y vs ln x (power; exponent reported with y ~ x^-gamma
// sign convention) or y vs ln x (log). Needs >= 3 sizes.
ScalingFit scaling_fit(const std::vector<double>& sizes, const std::vector<double>& values,
                       ScalingFit::Model model);

struct CriticalEstimate {
    double location = 0.0;
    double uncertainty = 0.0;  // one grid spacing
    std::string method;
    double analytic = 0.0;
};

// Parabolic refinement of an interior extremum of a scan curve.
CriticalEstimate estimate_critical_extremum(const ScanCurve& curve, bool maximum);

// Location of the minimum of d(nu)/d(param) by central differences plus
// parabolic refinement (coupled-top estimator).
CriticalEstimate estimate_critical_exponent_drop(const std::vector<double>& params,
                                                 const std::vector<double>& nu);

} // namespace esq
