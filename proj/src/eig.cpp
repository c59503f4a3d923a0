#include "esq/eig.hpp"

#include <stdexcept>
#include <utility>

namespace esq {

EigenSystem eigensolve(const Matrix& h, std::string tag)
{
    if (h.rows() != h.cols()) throw std::invalid_argument("eigensolve: matrix not square");
    if (hermiticity_residual(h) > 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("eigensolve: matrix not Hermitian");

    EigenSystem out;
    out.tag = std::move(tag);
    if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real());
        if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve: real solver failed");
        out.values = es.eigenvalues();
        out.vectors = es.eigenvectors().cast<cxd>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve: complex solver failed");
        out.values = es.eigenvalues();
        out.vectors = es.eigenvectors();
    }
    return out;
}

} // namespace esq
