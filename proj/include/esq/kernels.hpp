#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops behind the Husimi evaluator and the phase-space
// reductions. Every kernel has a scalar reference implementation and an AVX2
// variant; the dispatched entry points pick the best ISA available at
// runtime. The variants are equivalence-tested against each other.
namespace esq::kernels {

enum class Isa { scalar, avx2 };

// Best ISA supported by the host.
Isa detected();
// Currently active ISA (tests may pin the scalar path).
Isa active();
void force(Isa isa);
std::string isa_name(Isa isa);

// sum_r |sum_k conj(z_k) * a_{r,k}|^2 for split-complex row-major A
// (nrows x len, leading dimension stride) and a split-complex vector z.
// This is the per-node Husimi evaluation: rows are scaled state vectors,
// z the coherent-state amplitudes at the node.
double abs2_dot_rows(const double* ar, const double* ai,
                     std::size_t nrows, std::size_t len, std::size_t stride,
                     const double* zr, const double* zi);

// Compensated weighted reductions over grid nodes.
double weighted_sum(const double* w, const double* q, std::size_t n);        // sum w*q
double weighted_sum_sq(const double* w, const double* q, std::size_t n);     // sum w*q^2
double weighted_xlogx(const double* w, const double* q, std::size_t n);      // sum w*q*ln(q), 0 at q=0

namespace scalar {
double abs2_dot_rows(const double* ar, const double* ai,
                     std::size_t nrows, std::size_t len, std::size_t stride,
                     const double* zr, const double* zi);
double weighted_sum(const double* w, const double* q, std::size_t n);
double weighted_sum_sq(const double* w, const double* q, std::size_t n);
double weighted_xlogx(const double* w, const double* q, std::size_t n);
} // namespace scalar

namespace avx2 {
bool available();
double abs2_dot_rows(const double* ar, const double* ai,
                     std::size_t nrows, std::size_t len, std::size_t stride,
                     const double* zr, const double* zi);
double weighted_sum(const double* w, const double* q, std::size_t n);
double weighted_sum_sq(const double* w, const double* q, std::size_t n);
} // namespace avx2

} // namespace esq::kernels
