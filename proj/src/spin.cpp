#include "esq/spin.hpp"
#include "esq/util.hpp"

#include <cmath>
#include <stdexcept>

namespace esq {

SpinBasis::SpinBasis(double j_) : j(j_)
{
    twoj = require_half_integer(j_, "SpinBasis");
    if (twoj < 1) throw std::invalid_argument("SpinBasis: j must be >= 1/2");
}

double hermiticity_residual(const Matrix& m)
{
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

CollectiveOps build_collective_ops(const SpinBasis& basis)
{
    const Eigen::Index d = basis.dim();
    const double j = basis.j;

    Matrix jz = Matrix::Zero(d, d);
    Matrix jp = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        double m = basis.m(i);
        jz(i, i) = m;
        if (i + 1 < d) jp(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    Matrix jm = jp.adjoint();
    Matrix jx = 0.5 * (jp + jm);
    Matrix jy = (jp - jm) / cxd(0.0, 2.0);

    BasisId id = BasisId::spin(j);
    return {{jx, id}, {jy, id}, {jz, id}, jp, jm};
}

Matrix tensor_embed(const Matrix& op, int slot, const TensorBasis& tb)
{
    const Eigen::Index d1 = tb.b1.dim(), d2 = tb.b2.dim();
    if (slot != 1 && slot != 2) throw std::invalid_argument("tensor_embed: slot must be 1 or 2");
    if ((slot == 1 && op.rows() != d1) || (slot == 2 && op.rows() != d2) || op.rows() != op.cols())
        throw std::invalid_argument("tensor_embed: operator dimension does not match slot");

    Matrix out = Matrix::Zero(tb.dim(), tb.dim());
    if (slot == 1) {
        for (Eigen::Index a = 0; a < d1; ++a)
            for (Eigen::Index b = 0; b < d1; ++b)
                if (op(a, b) != 0.0)
                    for (Eigen::Index k = 0; k < d2; ++k)
                        out(tb.index(a, k), tb.index(b, k)) = op(a, b);
    } else {
        for (Eigen::Index a = 0; a < d2; ++a)
            for (Eigen::Index b = 0; b < d2; ++b)
                if (op(a, b) != 0.0)
                    for (Eigen::Index k = 0; k < d1; ++k)
                        out(tb.index(k, a), tb.index(k, b)) = op(a, b);
    }
    return out;
}

HermitianOperator tensor_embed(const HermitianOperator& op, int slot, const TensorBasis& tb)
{
    return {tensor_embed(op.mat, slot, tb), BasisId::tensor(tb.b1.j, tb.b2.j)};
}

Matrix SectorIsometry::dense() const
{
    Matrix m = Matrix::Zero(full_dim, sector_dim());
    for (Eigen::Index a = 0; a < sector_dim(); ++a)
        for (auto& [row, c] : cols[a]) m(row, a) = c;
    return m;
}

Vector SectorIsometry::embed(const Vector& sector_vec) const
{
    if (sector_vec.size() != sector_dim())
        throw std::invalid_argument("SectorIsometry::embed: dimension mismatch");
    Vector out = Vector::Zero(full_dim);
    for (Eigen::Index a = 0; a < sector_dim(); ++a)
        for (auto& [row, c] : cols[a]) out(row) += c * sector_vec(a);
    return out;
}

Vector SectorIsometry::project(const Vector& full_vec) const
{
    if (full_vec.size() != full_dim)
        throw std::invalid_argument("SectorIsometry::project: dimension mismatch");
    Vector out = Vector::Zero(sector_dim());
    for (Eigen::Index a = 0; a < sector_dim(); ++a) {
        cxd s = 0.0;
        for (auto& [row, c] : cols[a]) s += c * full_vec(row);
        out(a) = s;
    }
    return out;
}

Matrix SectorIsometry::project_operator(const Matrix& full_op) const
{
    if (full_op.rows() != full_dim || full_op.cols() != full_dim)
        throw std::invalid_argument("SectorIsometry::project_operator: dimension mismatch");
    const Eigen::Index d = sector_dim();
    Matrix out(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            cxd s = 0.0;
            for (auto& [ra, ca] : cols[a])
                for (auto& [rb, cb] : cols[b]) s += ca * cb * full_op(ra, rb);
            out(a, b) = s;
        }
    return out;
}

SectorIsometry build_sector(const SpinBasis& basis, int parity)
{
    if (parity != 1 && parity != -1) throw std::invalid_argument("build_sector: parity must be +1 or -1");
    SectorIsometry iso;
    iso.full_dim = basis.dim();
    iso.parity = parity;
    iso.permutation = 0;
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        // Pi = (-1)^(j - m), j - m = 2j - i
        int sign = ((basis.twoj - i) % 2 == 0) ? 1 : -1;
        if (sign == parity) iso.cols.push_back({{i, 1.0}});
    }
    return iso;
}

SectorIsometry build_sector(const TensorBasis& tb, int parity, int permutation)
{
    if (parity != 1 && parity != -1) throw std::invalid_argument("build_sector: parity must be +1 or -1");
    if (permutation != 0 && permutation != 1 && permutation != -1)
        throw std::invalid_argument("build_sector: permutation must be +1, -1, or 0");
    if (permutation != 0 && tb.b1.twoj != tb.b2.twoj)
        throw std::invalid_argument("build_sector: permutation sector requires equal spins");

    const Eigen::Index d1 = tb.b1.dim(), d2 = tb.b2.dim();
    SectorIsometry iso;
    iso.full_dim = tb.dim();
    iso.parity = parity;
    iso.permutation = permutation;

    auto parity_sign = [&](Eigen::Index i1, Eigen::Index i2) {
        // Pi = (-1)^(2j1 + 2j2 - (m1+m2) - ...) reduces to (-1)^(i1+i2)
        return ((i1 + i2) % 2 == 0) ? 1 : -1;
    };

    if (permutation == 0) {
        for (Eigen::Index i1 = 0; i1 < d1; ++i1)
            for (Eigen::Index i2 = 0; i2 < d2; ++i2)
                if (parity_sign(i1, i2) == parity)
                    iso.cols.push_back({{tb.index(i1, i2), 1.0}});
        return iso;
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i1 = 0; i1 < d1; ++i1)
        for (Eigen::Index i2 = i1; i2 < d2; ++i2) {
            if (parity_sign(i1, i2) != parity) continue;
            if (i1 == i2) {
                if (permutation == 1) iso.cols.push_back({{tb.index(i1, i1), 1.0}});
            } else {
                iso.cols.push_back({{tb.index(i1, i2), inv_sqrt2},
                                    {tb.index(i2, i1), permutation * inv_sqrt2}});
            }
        }
    return iso;
}

} // namespace esq
