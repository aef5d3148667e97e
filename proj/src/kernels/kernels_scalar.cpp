#include "kljn/kernels.hpp"

// Reference kernels. Kept free of any vectorization pragmas so they stay the
// ground truth the SIMD variants are checked against.

namespace kljn::kern::scalar {

void sub_scale(double* dst, const double* x, const double* y, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = (x[i] - y[i]) * c;
}

void scale_add(double* dst, const double* x, double c, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = x[i] * c + y[i];
}

void multiply(double* dst, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = x[i] * y[i];
}

void scale(double* dst, const double* x, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = x[i] * c;
}

void add_scalar(double* dst, const double* x, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = x[i] + c;
}

void accumulate(double* acc, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double sum_squares(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

RawMoments power_sums(const double* x, std::size_t n) {
    RawMoments m;
    for (std::size_t i = 0; i < n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) dst[i] = x[i] >= 0.0 ? 1 : -1;
}

std::size_t first_mismatch(const std::int8_t* a, const std::int8_t* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return i;
    }
    return n;
}

}  // namespace kljn::kern::scalar
