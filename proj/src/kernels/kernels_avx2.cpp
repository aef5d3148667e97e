// AVX2 kernel variants. Compiled with -mavx2 but not -mfma, and with
// -ffp-contract=off, so every elementwise lane performs the same mul/add
// sequence as the scalar reference and the results match bit for bit.
// Reductions use 4-lane accumulators and may differ from the scalar sums in
// the last bits.

#include "kljn/kernels.hpp"

#if defined(KLJN_HAVE_AVX2_BUILD)

#include <immintrin.h>

#include <bit>

namespace kljn::kern::avx2 {

void sub_scale(double* dst, const double* x, const double* y, double c, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_sub_pd(vx, vy), vc));
    }
    for (; i < n; ++i) dst[i] = (x[i] - y[i]) * c;
}

void scale_add(double* dst, const double* x, double c, const double* y, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_mul_pd(vx, vc), vy));
    }
    for (; i < n; ++i) dst[i] = x[i] * c + y[i];
}

void multiply(double* dst, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) dst[i] = x[i] * y[i];
}

void scale(double* dst, const double* x, double c, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vc));
    }
    for (; i < n; ++i) dst[i] = x[i] * c;
}

void add_scalar(double* dst, const double* x, double c, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vc));
    }
    for (; i < n; ++i) dst[i] = x[i] + c;
}

void accumulate(double* acc, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(acc + i,
                         _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) acc[i] += x[i];
}

namespace {

inline double hsum(__m256d v) {
    double lanes[4];
    _mm256_storeu_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_squares(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

RawMoments power_sums(const double* x, std::size_t n) {
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    __m256d a4 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d v2 = _mm256_mul_pd(v, v);
        a1 = _mm256_add_pd(a1, v);
        a2 = _mm256_add_pd(a2, v2);
        a3 = _mm256_add_pd(a3, _mm256_mul_pd(v2, v));
        a4 = _mm256_add_pd(a4, _mm256_mul_pd(v2, v2));
    }
    RawMoments m{hsum(a1), hsum(a2), hsum(a3), hsum(a4)};
    for (; i < n; ++i) {
        const double v = x[i];
        const double v2 = v * v;
        m.m1 += v;
        m.m2 += v2;
        m.m3 += v2 * v;
        m.m4 += v2 * v2;
    }
    return m;
}

void sign_pm1(std::int8_t* dst, const double* x, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const int mask =
            _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_GE_OQ));
        dst[i + 0] = (mask & 1) ? 1 : -1;
        dst[i + 1] = (mask & 2) ? 1 : -1;
        dst[i + 2] = (mask & 4) ? 1 : -1;
        dst[i + 3] = (mask & 8) ? 1 : -1;
    }
    for (; i < n; ++i) dst[i] = x[i] >= 0.0 ? 1 : -1;
}

std::size_t first_mismatch(const std::int8_t* a, const std::int8_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const auto eq =
            static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
        if (eq != 0xFFFFFFFFu) return i + std::countr_zero(~eq);
    }
    for (; i < n; ++i) {
        if (a[i] != b[i]) return i;
    }
    return n;
}

}  // namespace kljn::kern::avx2

#endif  // KLJN_HAVE_AVX2_BUILD
