#pragma once

#include "esq/spin.hpp"

#include <vector>

namespace esq {

struct LipkinSpec {
    long n_particles;  // even, >= 2; j = N/2
    double kappa;      // field strength in [0, 1]

    LipkinSpec(long n, double kappa_);
    double j() const { return 0.5 * static_cast<double>(n_particles); }
};

struct CoupledTopSpec {
    long j;     // integer spin, >= 1
    double xi;  // coupling, >= 0

    CoupledTopSpec(long j_, double xi_);
};

enum class LipkinSector { even, odd, full };
enum class CtSector { vpp, full };

// H = -4(1-kappa)/N Jx^2 + kappa (Jz + N/2), in the requested parity block.
HermitianOperator lipkin_hamiltonian(const LipkinSpec& spec, LipkinSector sector);
SectorIsometry lipkin_sector_isometry(const LipkinSpec& spec, int parity);

// H = J1z + J2z + xi/j J1x J2x, full product basis or the V++ block.
HermitianOperator coupled_top_hamiltonian(const CoupledTopSpec& spec, CtSector sector);

// Any (permutation, parity) block, assembled directly from sparse matrix
// elements (never materializes the full product-basis matrix).
Matrix coupled_top_sector_matrix(const CoupledTopSpec& spec, int parity, int permutation);
SectorIsometry coupled_top_sector_isometry(const CoupledTopSpec& spec, int parity, int permutation);

// Gaussian-broadened level density on a rescaled energy axis.
struct SpectrumHistogram {
    std::vector<double> bin_edges;    // size bins+1, rescaled units
    std::vector<double> bin_centers;  // size bins
    std::vector<double> density;      // omega-tilde per bin
    long level_count = 0;
    double smoothing_width = 0.0;  // in rescaled energy units
    double rescale_norm = 1.0;     // integral(density) * rescale_norm = level_count
};

// levels: raw energies (any order). axis_scale multiplies each energy
// (e.g. 1/(2j)); rescale_norm divides the count density (e.g. j for
// omega/j). bins = 0 picks round(sqrt(level count)); smoothing_width = 0
// picks span/bins.
SpectrumHistogram density_of_states(std::vector<double> levels, double axis_scale,
                                    double rescale_norm, int bins = 0,
                                    double smoothing_width = 0.0);

// Central-difference d(density)/dE on bin centers, one-sided at the ends.
std::vector<double> dos_derivative(const SpectrumHistogram& hist);

} // namespace esq
