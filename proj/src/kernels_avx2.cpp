// AVX2/FMA variants. Compiled with -mavx2 -mfma for this translation unit
// only; callers must check avx2::available() (the dispatcher does).
#include "esq/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define ESQ_HAVE_X86 1
#endif

namespace esq::kernels::avx2 {

bool available()
{
#ifdef ESQ_HAVE_X86
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

#ifdef ESQ_HAVE_X86

static inline double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double abs2_dot_rows(const double* ar, const double* ai,
                     std::size_t nrows, std::size_t len, std::size_t stride,
                     const double* zr, const double* zi)
{
    double q = 0.0;
    std::size_t len4 = len & ~std::size_t(3);
    for (std::size_t r = 0; r < nrows; ++r) {
        const double* xr = ar + r * stride;
        const double* xi = ai + r * stride;
        __m256d vr = _mm256_setzero_pd();
        __m256d vi = _mm256_setzero_pd();
        for (std::size_t k = 0; k < len4; k += 4) {
            __m256d zrv = _mm256_loadu_pd(zr + k);
            __m256d ziv = _mm256_loadu_pd(zi + k);
            __m256d xrv = _mm256_loadu_pd(xr + k);
            __m256d xiv = _mm256_loadu_pd(xi + k);
            vr = _mm256_fmadd_pd(zrv, xrv, vr);
            vr = _mm256_fmadd_pd(ziv, xiv, vr);
            vi = _mm256_fmadd_pd(zrv, xiv, vi);
            vi = _mm256_fnmadd_pd(ziv, xrv, vi);
        }
        double sr = hsum(vr), si = hsum(vi);
        for (std::size_t k = len4; k < len; ++k) {
            sr += zr[k] * xr[k] + zi[k] * xi[k];
            si += zr[k] * xi[k] - zi[k] * xr[k];
        }
        q += sr * sr + si * si;
    }
    return q;
}

// 4-lane Kahan accumulation, lanes combined with a scalar Kahan pass.
namespace {
struct Kahan4 {
    __m256d sum = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();
    inline void add(__m256d x)
    {
        __m256d y = _mm256_sub_pd(x, c);
        __m256d t = _mm256_add_pd(sum, y);
        c = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
        sum = t;
    }
    double value() const
    {
        alignas(32) double s[4], cc[4];
        _mm256_store_pd(s, sum);
        _mm256_store_pd(cc, c);
        double total = 0.0, comp = 0.0;
        for (int l = 0; l < 4; ++l) {
            double x = s[l] - cc[l];
            double y = x - comp;
            double t = total + y;
            comp = (t - total) - y;
            total = t;
        }
        return total;
    }
};
} // namespace

double weighted_sum(const double* w, const double* q, std::size_t n)
{
    Kahan4 acc;
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4)
        acc.add(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(q + i)));
    double total = acc.value();
    for (std::size_t i = n4; i < n; ++i) total += w[i] * q[i];
    return total;
}

double weighted_sum_sq(const double* w, const double* q, std::size_t n)
{
    Kahan4 acc;
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d qv = _mm256_loadu_pd(q + i);
        acc.add(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(qv, qv)));
    }
    double total = acc.value();
    for (std::size_t i = n4; i < n; ++i) total += w[i] * q[i] * q[i];
    return total;
}

#else // !ESQ_HAVE_X86

double abs2_dot_rows(const double* ar, const double* ai,
                     std::size_t nrows, std::size_t len, std::size_t stride,
                     const double* zr, const double* zi)
{
    return scalar::abs2_dot_rows(ar, ai, nrows, len, stride, zr, zi);
}
double weighted_sum(const double* w, const double* q, std::size_t n)
{
    return scalar::weighted_sum(w, q, n);
}
double weighted_sum_sq(const double* w, const double* q, std::size_t n)
{
    return scalar::weighted_sum_sq(w, q, n);
}

#endif

} // namespace esq::kernels::avx2
