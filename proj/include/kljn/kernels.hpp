#pragma once
// Data-parallel kernels for the waveform math. Every kernel has a scalar
// reference implementation (kljn::kern::scalar) and, on x86-64, an AVX2
// variant; the dispatched entry points pick one at runtime. Elementwise
// kernels are bit-identical between backends (one IEEE rounding per
// element, no FMA contraction); reductions may differ in the last bits
// because the vector variants use lane accumulators.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace kljn::kern {

enum class Backend { scalar, avx2 };

// Backend selected for the dispatched entry points below.
Backend active_backend();

// Force a backend; returns false (and leaves the selection unchanged) if the
// CPU does not support it. Used by tests and the --kernels CLI option.
bool set_backend(Backend b);

// Re-run CPU detection and pick the best supported backend.
void reset_backend();

std::string_view backend_name(Backend b);

struct RawMoments {
    double m1 = 0.0;  // sum x
    double m2 = 0.0;  // sum x^2
    double m3 = 0.0;  // sum x^3
    double m4 = 0.0;  // sum x^4
};

// dst[i] = (x[i] - y[i]) * c
void sub_scale(double* dst, const double* x, const double* y, double c, std::size_t n);
// dst[i] = x[i] * c + y[i]
void scale_add(double* dst, const double* x, double c, const double* y, std::size_t n);
// dst[i] = x[i] * y[i]
void multiply(double* dst, const double* x, const double* y, std::size_t n);
// dst[i] = x[i] * c
void scale(double* dst, const double* x, double c, std::size_t n);
// dst[i] = x[i] + c
void add_scalar(double* dst, const double* x, double c, std::size_t n);
// acc[i] += x[i]
void accumulate(double* acc, const double* x, std::size_t n);

double sum(const double* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
// sum over i of (x[i] - y[i])^2
double sum_sq_diff(const double* x, const double* y, std::size_t n);
RawMoments power_sums(const double* x, std::size_t n);

// dst[i] = +1 if x[i] >= 0 else -1 (zero maps to +1)
void sign_pm1(std::int8_t* dst, const double* x, std::size_t n);
// index of the first position where a and b differ, or n if none
std::size_t first_mismatch(const std::int8_t* a, const std::int8_t* b, std::size_t n);

// Reference implementations; always available, used as the equivalence
// oracle for the dispatched variants.
namespace scalar {
void sub_scale(double* dst, const double* x, const double* y, double c, std::size_t n);
void scale_add(double* dst, const double* x, double c, const double* y, std::size_t n);
void multiply(double* dst, const double* x, const double* y, std::size_t n);
void scale(double* dst, const double* x, double c, std::size_t n);
void add_scalar(double* dst, const double* x, double c, std::size_t n);
void accumulate(double* acc, const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
double sum_sq_diff(const double* x, const double* y, std::size_t n);
RawMoments power_sums(const double* x, std::size_t n);
void sign_pm1(std::int8_t* dst, const double* x, std::size_t n);
std::size_t first_mismatch(const std::int8_t* a, const std::int8_t* b, std::size_t n);
}  // namespace scalar

}  // namespace kljn::kern
