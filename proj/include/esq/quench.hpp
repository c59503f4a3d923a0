#pragma once

#include "esq/cache.hpp"
#include "esq/eig.hpp"
#include "esq/husimi.hpp"
#include "esq/models.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace esq {

struct LipkinQuench {
    long n_particles;
    double kappa;  // pre-quench field, in (0, 4/5) for ESQPT runs
    double eta;    // post-quench field added along z

    LipkinQuench(long n, double kappa_, double eta_);
    double j() const { return 0.5 * static_cast<double>(n_particles); }
};

struct CoupledTopQuench {
    long j;
    double xi0;  // pre-quench coupling, > 1
    double xi1;  // post-quench coupling, >= 0

    CoupledTopQuench(long j_, double xi0_, double xi1_);
};

using QuenchSpec = std::variant<LipkinQuench, CoupledTopQuench>;

struct OverlapProfile {
    Vector amplitudes;      // c_n = <E_n|psi_0>
    RVector probabilities;  // |c_n|^2
    double mean_energy = 0.0;
};

// Lowest eigenvector of the pre-quench Hamiltonian in its ground-state
// sector (Lipkin even block / coupled-top V++ block).
Vector prepare_ground_state(const LipkinSpec& spec, EigCache* cache = nullptr);
Vector prepare_ground_state(const CoupledTopSpec& spec, EigCache* cache = nullptr);

// Everything a quench needs, prepared once: post-quench eigensystem in the
// ground-state sector, the sector isometry, the initial state, overlaps.
struct QuenchWorkspace {
    QuenchSpec spec;
    double j_phase;        // spin carried by the phase-space chart (N/2 or j)
    SectorIsometry iso;    // sector -> full basis of the quenched Hamiltonian
    EigenSystem eig;       // post-quench, sector basis
    Vector psi0;           // sector basis
    OverlapProfile overlaps;
};

QuenchWorkspace prepare_quench(const QuenchSpec& spec, EigCache* cache = nullptr);

// Long-time average of the quenched state. Eigenvalue clusters closer than
// degeneracy_tol keep their intra-cluster coherences; across clusters the
// state dephases. degeneracy_tol <= 0 picks 1e-10 * spectral span.
struct DiagonalEnsemble {
    Matrix rho;  // sector basis
    double degeneracy_tol = 0.0;
    std::vector<std::vector<Eigen::Index>> clusters;
};

DiagonalEnsemble diagonal_ensemble(const OverlapProfile& overlaps, const EigenSystem& eig,
                                   double degeneracy_tol = 0.0);

// Q_t of the evolved state; t = 0 reproduces the initial-state field.
HusimiField evolved_husimi(const QuenchWorkspace& ws, double t, GridPtr grid,
                           bool override_grid_check = false);

// Q-bar of the long-time averaged state (Lipkin), or of its first-spin
// reduction (coupled top).
HusimiField averaged_husimi(const QuenchWorkspace& ws, GridPtr grid,
                            bool override_grid_check = false,
                            double truncation_mass = 1e-12);

// Reduced density matrix of the first/second spin of a (2j+1)^2 operator.
Matrix partial_trace_first(const Matrix& rho_full, long j);
Matrix partial_trace_second(const Matrix& rho_full, long j);

// <psi(t)|H_f|psi(t)> in the sector basis (constant in t).
double post_quench_energy(const QuenchWorkspace& ws);

} // namespace esq
