// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "ncstokes/kernels.hpp"

#include <immintrin.h>

namespace ncstokes::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const double* pa = a.data();
    const double* pb = b.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        s += pa[i] * pb[i];
    }
    return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
        _mm256_storeu_pd(y.data() + i, r);
    }
    for (; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
    const std::size_t n = x.size();
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y.data() + i), _mm256_loadu_pd(x.data() + i));
        _mm256_storeu_pd(y.data() + i, r);
    }
    for (; i < n; ++i) {
        y[i] = x[i] + beta * y[i];
    }
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
    const double* px = x.data();
    for (int r = 0; r < a.rows; ++r) {
        int k = a.row_ptr[r];
        const int end = a.row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.col + k));
            const __m256d xv = _mm256_i32gather_pd(px, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.val + k), xv, acc);
        }
        double s = hsum(acc);
        for (; k < end; ++k) {
            s += a.val[k] * px[a.col[k]];
        }
        y[static_cast<std::size_t>(r)] = s;
    }
}

} // namespace ncstokes::kernels::avx2
