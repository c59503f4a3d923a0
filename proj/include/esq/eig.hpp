#pragma once

#include "esq/spin.hpp"

#include <string>

namespace esq {

// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending,
// eigenvector columns orthonormal.
struct EigenSystem {
    RVector values;
    Matrix vectors;
    std::string tag;

    Eigen::Index dim() const { return values.size(); }
};

// Dense Hermitian solve. Falls back to the real-symmetric path when the
// matrix has no imaginary part (all model Hamiltonians here are real).
EigenSystem eigensolve(const Matrix& h, std::string tag = {});

} // namespace esq
