#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace esq {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// |j,m> basis, m ascending from -j to j.
struct SpinBasis {
    double j;
    long twoj;

    explicit SpinBasis(double j_);
    Eigen::Index dim() const { return static_cast<Eigen::Index>(twoj) + 1; }
    double m(Eigen::Index i) const { return -j + static_cast<double>(i); }
};

// Product basis |j1,m1>|j2,m2>, row-major with m1 outer, m2 inner.
struct TensorBasis {
    SpinBasis b1, b2;

    TensorBasis(SpinBasis b1_, SpinBasis b2_) : b1(std::move(b1_)), b2(std::move(b2_)) {}
    Eigen::Index dim() const { return b1.dim() * b2.dim(); }
    Eigen::Index index(Eigen::Index i1, Eigen::Index i2) const { return i1 * b2.dim() + i2; }
};

struct BasisId {
    enum class Kind { spin, tensor } kind;
    double j1 = 0.0;
    double j2 = 0.0;

    static BasisId spin(double j) { return {Kind::spin, j, 0.0}; }
    static BasisId tensor(double j1, double j2) { return {Kind::tensor, j1, j2}; }
    bool operator==(const BasisId&) const = default;
};

struct HermitianOperator {
    Matrix mat;
    BasisId basis;
};

double hermiticity_residual(const Matrix& m);

struct CollectiveOps {
    HermitianOperator jx, jy, jz;
    Matrix jp, jm; // ladder pair, jm = jp.adjoint()
};

// Jz diagonal with entries m; <j,m+1|J+|j,m> = sqrt(j(j+1) - m(m+1)).
CollectiveOps build_collective_ops(const SpinBasis& basis);

// op (x) I or I (x) op in the row-major (m1 outer) ordering.
HermitianOperator tensor_embed(const HermitianOperator& op, int slot, const TensorBasis& tb);
Matrix tensor_embed(const Matrix& op, int slot, const TensorBasis& tb);

// Isometry from a symmetry sector into the full basis. Columns are stored
// sparsely (each sector basis vector touches at most two product states);
// the dense map is materialized on demand.
struct SectorIsometry {
    Eigen::Index full_dim = 0;
    int parity = 0;       // +1 or -1
    int permutation = 0;  // +1, -1, or 0 when no permutation label applies
    // cols[a] = list of (full-basis row, real coefficient)
    std::vector<std::vector<std::pair<Eigen::Index, double>>> cols;

    Eigen::Index sector_dim() const { return static_cast<Eigen::Index>(cols.size()); }
    Matrix dense() const;
    Vector embed(const Vector& sector_vec) const;
    Vector project(const Vector& full_vec) const;          // map^dag x
    Matrix project_operator(const Matrix& full_op) const;  // map^dag H map
};

// Parity sector of a single collective spin, Pi = (-1)^(j-m).
SectorIsometry build_sector(const SpinBasis& basis, int parity);

// (permutation, parity) sector of two equal integer spins,
// Pi = (-1)^(2j - m1 - m2). permutation = 0 selects parity only.
SectorIsometry build_sector(const TensorBasis& tb, int parity, int permutation);

} // namespace esq
