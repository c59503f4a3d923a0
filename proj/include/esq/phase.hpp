#pragma once

#include "esq/spin.hpp"

#include <memory>
#include <vector>

namespace esq {

// Canonical chart on the disk p^2 + q^2 < 4 (hbar = 1).
struct PhasePoint {
    double p = 0.0;
    double q = 0.0;
    double radius2() const { return p * p + q * q; }
};

// zeta = (q - i p) / sqrt(4 - p^2 - q^2); rejects points on or outside the rim.
cxd zeta_from_pq(const PhasePoint& pt);

enum class GridScheme { polar_gauss, cartesian_masked };

// Quadrature nodes/weights on the disk; weights sum to 4*pi.
struct PhaseSpaceGrid {
    GridScheme scheme = GridScheme::polar_gauss;
    int n_radial = 0;
    int n_angular = 0;
    double spacing = 0.0;  // cartesian only

    // flat node arrays (SoA); polar ordering: ring-major, angle inner
    std::vector<double> p, q, w;
    // polar structure, empty for cartesian
    std::vector<double> u;      // Gauss-Legendre nodes in u = (p^2+q^2)/4
    std::vector<double> wu;     // matching weights on [0,1]
    std::vector<double> theta;  // uniform angles

    std::size_t size() const { return w.size(); }
    double weight_sum() const;
    // Minimum-resolution rule for spin j: n_radial >= j+1, n_angular >= 4j+2.
    bool adequate_for(double j) const;
};

using GridPtr = std::shared_ptr<const PhaseSpaceGrid>;

PhaseSpaceGrid build_polar_grid(int n_radial, int n_angular);
PhaseSpaceGrid build_cartesian_grid(double spacing);
// Default resolution for spin j: n_radial = 2j+2, n_angular = 4j+4. This is
// exact (up to rounding) for integrals of both Q and Q^2.
GridPtr mandated_grid(double j);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights);

// <j,m|zeta(p,q)> in log-magnitude/phase form, indexed by k = j + m.
struct CoherentAmplitudes {
    double j = 0.0;
    std::vector<double> log_mag;
    std::vector<double> phase;

    Vector vector() const;
};

// Half-log binomial table lb[k] = 0.5*ln C(2j, k).
std::vector<double> half_log_binomials(double j);

CoherentAmplitudes coherent_amplitudes(double j, const PhasePoint& pt);
// Unit-norm coherent state vector, stable through log-space binomials.
Vector coherent_state(double j, const PhasePoint& pt);

// Operator-norm deviation of the quadrature resolution of identity from 1.
double closure_residual(const PhaseSpaceGrid& grid, double j);

} // namespace esq
