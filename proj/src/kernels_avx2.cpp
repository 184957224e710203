// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; callers reach it only through the runtime dispatch in
// kernels.cpp after a cpuid check.
#include "macforge/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace macforge::kernels {

namespace {

inline double hsum256(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

void matvec_avx2(const double* W, const double* x, const double* b, double* y, std::size_t rows,
                 std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = W + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
        double s = hsum256(acc);
        for (; c < cols; ++c) s += row[c] * x[c];
        y[r] = s + (b ? b[r] : 0.0);
    }
}

void matvec_t_avx2(const double* W, const double* g, double* gx, std::size_t rows,
                   std::size_t cols) {
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) _mm256_storeu_pd(gx + c, _mm256_setzero_pd());
    for (; c < cols; ++c) gx[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = W + r * cols;
        const __m256d gr = _mm256_set1_pd(g[r]);
        c = 0;
        for (; c + 4 <= cols; c += 4) {
            __m256d acc = _mm256_loadu_pd(gx + c);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), gr, acc);
            _mm256_storeu_pd(gx + c, acc);
        }
        for (; c < cols; ++c) gx[c] += row[c] * g[r];
    }
}

void outer_acc_avx2(double* GW, const double* g, const double* x, std::size_t rows,
                    std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = GW + r * cols;
        const __m256d gr = _mm256_set1_pd(g[r]);
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            __m256d acc = _mm256_loadu_pd(row + c);
            acc = _mm256_fmadd_pd(gr, _mm256_loadu_pd(x + c), acc);
            _mm256_storeu_pd(row + c, acc);
        }
        for (; c < cols; ++c) row[c] += g[r] * x[c];
    }
}

void relu_avx2(double* v, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(v + i, _mm256_max_pd(_mm256_loadu_pd(v + i), zero));
    for (; i < n; ++i)
        if (v[i] < 0.0) v[i] = 0.0;
}

void relu_grad_avx2(const double* pre, double* g, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(g + i, _mm256_and_pd(_mm256_loadu_pd(g + i), mask));
    }
    for (; i < n; ++i)
        if (pre[i] <= 0.0) g[i] = 0.0;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(y + i);
        acc = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), acc);
        _mm256_storeu_pd(y + i, acc);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum256(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

const Ops kAvx2 = {matvec_avx2, matvec_t_avx2, outer_acc_avx2, relu_avx2,
                   relu_grad_avx2, axpy_avx2, dot_avx2, "avx2"};

}  // namespace

const Ops* avx2_ops() { return &kAvx2; }

}  // namespace macforge::kernels

#else

namespace macforge::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace macforge::kernels

#endif
