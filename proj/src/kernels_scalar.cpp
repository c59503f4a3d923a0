#include "esq/kernels.hpp"
#include "esq/util.hpp"

#include <cmath>

namespace esq::kernels::scalar {

double abs2_dot_rows(const double* ar, const double* ai,
                     std::size_t nrows, std::size_t len, std::size_t stride,
                     const double* zr, const double* zi)
{
    double q = 0.0;
    for (std::size_t r = 0; r < nrows; ++r) {
        const double* xr = ar + r * stride;
        const double* xi = ai + r * stride;
        double sr = 0.0, si = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            // conj(z) * x
            sr += zr[k] * xr[k] + zi[k] * xi[k];
            si += zr[k] * xi[k] - zi[k] * xr[k];
        }
        q += sr * sr + si * si;
    }
    return q;
}

double weighted_sum(const double* w, const double* q, std::size_t n)
{
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(w[i] * q[i]);
    return acc.value();
}

double weighted_sum_sq(const double* w, const double* q, std::size_t n)
{
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(w[i] * q[i] * q[i]);
    return acc.value();
}

double weighted_xlogx(const double* w, const double* q, std::size_t n)
{
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(w[i] * xlogx(q[i]));
    return acc.value();
}

} // namespace esq::kernels::scalar
