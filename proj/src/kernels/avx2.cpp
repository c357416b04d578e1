// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "kernel_impl.hpp"

#include <immintrin.h>

namespace repcol::kernels::avx2 {

namespace {

// (a0, a1) * (b0, b1) for two interleaved complex lanes, given b with its
// re/im swapped. fmaddsub subtracts in even lanes and adds in odd ones.
inline __m256d cmul(__m256d a_re, __m256d a_im, __m256d b, __m256d b_swap) {
    return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
}

inline __m256d dup_pair(const double* p) {
    const __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(p));
    return _mm256_permute4x64_pd(v, 0b01010000);
}

}  // namespace

void caxpy(std::size_t n, const double* a, const double* x, double* y) {
    const __m256d ar = _mm256_set1_pd(a[0]);
    const __m256d ai = _mm256_set1_pd(a[1]);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(x + 2 * i);
        const __m256d xs = _mm256_permute_pd(xv, 0b0101);
        const __m256d yv = _mm256_loadu_pd(y + 2 * i);
        _mm256_storeu_pd(y + 2 * i, _mm256_add_pd(yv, cmul(ar, ai, xv, xs)));
    }
    for (; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        y[2 * i] += a[0] * xr - a[1] * xi;
        y[2 * i + 1] += a[0] * xi + a[1] * xr;
    }
}

void cmul_acc(std::size_t n, const double* k, const double* x, double* y) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d kv = _mm256_loadu_pd(k + 2 * i);
        const __m256d kr = _mm256_movedup_pd(kv);
        const __m256d ki = _mm256_permute_pd(kv, 0b1111);
        const __m256d xv = _mm256_loadu_pd(x + 2 * i);
        const __m256d xs = _mm256_permute_pd(xv, 0b0101);
        const __m256d yv = _mm256_loadu_pd(y + 2 * i);
        _mm256_storeu_pd(y + 2 * i, _mm256_add_pd(yv, cmul(kr, ki, xv, xs)));
    }
    for (; i < n; ++i) {
        const double kr = k[2 * i], ki = k[2 * i + 1];
        const double xr = x[2 * i], xi = x[2 * i + 1];
        y[2 * i] += kr * xr - ki * xi;
        y[2 * i + 1] += kr * xi + ki * xr;
    }
}

void rgemv_cplx(std::size_t rows, std::size_t cols, const double* m, std::size_t ld,
                const double* x, double* y) {
    std::size_t i = 0;
    for (; i + 8 <= rows; i += 8) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        __m256d acc2 = _mm256_setzero_pd();
        __m256d acc3 = _mm256_setzero_pd();
        for (std::size_t j = 0; j < cols; ++j) {
            const __m256d xv = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(x + 2 * j));
            const double* col = m + j * ld + i;
            acc0 = _mm256_fmadd_pd(dup_pair(col), xv, acc0);
            acc1 = _mm256_fmadd_pd(dup_pair(col + 2), xv, acc1);
            acc2 = _mm256_fmadd_pd(dup_pair(col + 4), xv, acc2);
            acc3 = _mm256_fmadd_pd(dup_pair(col + 6), xv, acc3);
        }
        _mm256_storeu_pd(y + 2 * i, acc0);
        _mm256_storeu_pd(y + 2 * i + 4, acc1);
        _mm256_storeu_pd(y + 2 * i + 8, acc2);
        _mm256_storeu_pd(y + 2 * i + 12, acc3);
    }
    for (; i + 2 <= rows; i += 2) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < cols; ++j) {
            const __m256d xv = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(x + 2 * j));
            acc = _mm256_fmadd_pd(dup_pair(m + j * ld + i), xv, acc);
        }
        _mm256_storeu_pd(y + 2 * i, acc);
    }
    for (; i < rows; ++i) {
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            re += m[j * ld + i] * x[2 * j];
            im += m[j * ld + i] * x[2 * j + 1];
        }
        y[2 * i] = re;
        y[2 * i + 1] = im;
    }
}

void cdotc(std::size_t n, const double* x, const double* y, double* out) {
    __m256d same = _mm256_setzero_pd();   // xr*yr, xi*yi
    __m256d cross = _mm256_setzero_pd();  // xr*yi, xi*yr
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(x + 2 * i);
        const __m256d yv = _mm256_loadu_pd(y + 2 * i);
        same = _mm256_fmadd_pd(xv, yv, same);
        cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), cross);
    }
    alignas(32) double s[4], c[4];
    _mm256_store_pd(s, same);
    _mm256_store_pd(c, cross);
    double re = (s[0] + s[2]) + (s[1] + s[3]);
    double im = (c[0] + c[2]) - (c[1] + c[3]);
    for (; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double yr = y[2 * i], yi = y[2 * i + 1];
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    out[0] = re;
    out[1] = im;
}

}  // namespace repcol::kernels::avx2
