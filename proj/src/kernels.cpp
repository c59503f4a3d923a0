#include "esq/kernels.hpp"

#include <atomic>

namespace esq::kernels {

namespace {
Isa detect()
{
    return avx2::available() ? Isa::avx2 : Isa::scalar;
}
std::atomic<Isa> g_active{detect()};
} // namespace

Isa detected() { return detect(); }
Isa active() { return g_active.load(); }

void force(Isa isa)
{
    if (isa == Isa::avx2 && !avx2::available()) isa = Isa::scalar;
    g_active.store(isa);
}

std::string isa_name(Isa isa)
{
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

double abs2_dot_rows(const double* ar, const double* ai,
                     std::size_t nrows, std::size_t len, std::size_t stride,
                     const double* zr, const double* zi)
{
    if (active() == Isa::avx2)
        return avx2::abs2_dot_rows(ar, ai, nrows, len, stride, zr, zi);
    return scalar::abs2_dot_rows(ar, ai, nrows, len, stride, zr, zi);
}

double weighted_sum(const double* w, const double* q, std::size_t n)
{
    if (active() == Isa::avx2) return avx2::weighted_sum(w, q, n);
    return scalar::weighted_sum(w, q, n);
}

double weighted_sum_sq(const double* w, const double* q, std::size_t n)
{
    if (active() == Isa::avx2) return avx2::weighted_sum_sq(w, q, n);
    return scalar::weighted_sum_sq(w, q, n);
}

double weighted_xlogx(const double* w, const double* q, std::size_t n)
{
    // No vector log worth the trouble; the entropy reduction is a tiny
    // fraction of field-evaluation time.
    return scalar::weighted_xlogx(w, q, n);
}

} // namespace esq::kernels
