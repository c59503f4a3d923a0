#pragma once

#include "esq/phase.hpp"
#include "esq/spin.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace esq {

// Rank decomposition rho = sum_r |row_r><row_r| with rows stored
// split-complex over a support subset of the |j,m> basis (k = j+m).
// Q(p,q) = sum_r |<zeta|row_r>|^2, which is what the kernels evaluate.
struct StateRows {
    double j = 0.0;
    std::vector<Eigen::Index> support;  // ascending k indices with nonzero data
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> re, im;  // nrows x |support|

    Eigen::Index nrows() const { return re.rows(); }
    double trace() const;  // sum_r ||row_r||^2

    // Pure state; rejects norm deviation > 1e-8.
    static StateRows from_state(double j, const Vector& psi);
    // Hermitian unit-trace PSD operator; eigendecomposed, tiny negative
    // eigenvalues clamped, rejects trace/positivity violations > 1e-8.
    static StateRows from_density(double j, const Matrix& rho);
    // rho = sum_n w_n |col_n><col_n| with w_n >= 0 (columns need not be unit).
    static StateRows from_weighted_states(double j, const Matrix& cols, const RVector& weights);
};

struct HusimiField {
    GridPtr grid;
    double j = 0.0;
    std::vector<double> values;
    double norm_residual = 0.0;  // |(2j+1)/(4pi) sum w Q - 1|
    std::shared_ptr<const StateRows> source;

    double max_value() const;
};

// Evaluates Q on every grid node. Rejects grids below the minimum
// resolution rule for j unless override_grid_check is set.
HusimiField husimi_field(std::shared_ptr<const StateRows> rows, GridPtr grid,
                         bool override_grid_check = false);
HusimiField husimi_field(const StateRows& rows, GridPtr grid,
                         bool override_grid_check = false);

// Single-point evaluation (used by the marginal integrator and tests).
double husimi_at(const StateRows& rows, const PhasePoint& pt);

// M2 = (2j+1)/(4pi) * integral Q^2
double second_moment(const HusimiField& field);
// W = -(2j+1)/(4pi) * integral Q ln Q, with x ln x -> 0 at Q = 0
double wehrl_entropy(const HusimiField& field);

struct MarginalDistribution {
    char axis = 'q';
    std::vector<double> nodes;       // Gauss-Legendre on [-2, 2]
    std::vector<double> gl_weights;
    std::vector<double> values;
    double j = 0.0;
    double norm_residual = 0.0;  // |sqrt((2j+1)/(4pi)) sum w v - 1|
};

// Marginals over dedicated chord quadratures (q first, then p).
// n_axis / n_chord = 0 picks 2j+2 points.
std::pair<MarginalDistribution, MarginalDistribution>
marginals(const HusimiField& field, int n_axis = 0, int n_chord = 0);

struct MarginalMeasures {
    double m2_q = 0.0, m2_p = 0.0, w_q = 0.0, w_p = 0.0;
};
MarginalMeasures marginal_measures(const MarginalDistribution& mq, const MarginalDistribution& mp);

struct LocalizationMeasures {
    double m2 = 0.0, w = 0.0;
    double m2_p = 0.0, m2_q = 0.0, w_p = 0.0, w_q = 0.0;
    double delta_m2 = 0.0;  // |m2 - m2_p*m2_q|
    double delta_w = 0.0;   // |w - (w_p + w_q)|
};
LocalizationMeasures localization_measures(const HusimiField& field,
                                           int n_axis = 0, int n_chord = 0);

// Number of connected components of {Q >= frac * max(Q)} on a polar grid
// (4-neighbour adjacency, periodic in the angle). Phase classifier for the
// "two packets vs one" diagnostics.
int superlevel_components(const HusimiField& field, double frac);

} // namespace esq
