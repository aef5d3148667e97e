#include "kljn/kernels.hpp"

namespace kljn::kern {

#if defined(KLJN_HAVE_AVX2_BUILD)
namespace avx2 {
void sub_scale(double*, const double*, const double*, double, std::size_t);
void scale_add(double*, const double*, double, const double*, std::size_t);
void multiply(double*, const double*, const double*, std::size_t);
void scale(double*, const double*, double, std::size_t);
void add_scalar(double*, const double*, double, std::size_t);
void accumulate(double*, const double*, std::size_t);
double sum(const double*, std::size_t);
double sum_squares(const double*, std::size_t);
double sum_sq_diff(const double*, const double*, std::size_t);
RawMoments power_sums(const double*, std::size_t);
void sign_pm1(std::int8_t*, const double*, std::size_t);
std::size_t first_mismatch(const std::int8_t*, const std::int8_t*, std::size_t);
}  // namespace avx2
#endif

namespace {

struct Table {
    void (*sub_scale)(double*, const double*, const double*, double, std::size_t);
    void (*scale_add)(double*, const double*, double, const double*, std::size_t);
    void (*multiply)(double*, const double*, const double*, std::size_t);
    void (*scale)(double*, const double*, double, std::size_t);
    void (*add_scalar)(double*, const double*, double, std::size_t);
    void (*accumulate)(double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sum_squares)(const double*, std::size_t);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
    RawMoments (*power_sums)(const double*, std::size_t);
    void (*sign_pm1)(std::int8_t*, const double*, std::size_t);
    std::size_t (*first_mismatch)(const std::int8_t*, const std::int8_t*, std::size_t);
};

constexpr Table kScalarTable = {
    scalar::sub_scale,  scalar::scale_add,   scalar::multiply,    scalar::scale,
    scalar::add_scalar, scalar::accumulate,  scalar::sum,         scalar::sum_squares,
    scalar::sum_sq_diff, scalar::power_sums, scalar::sign_pm1,    scalar::first_mismatch,
};

#if defined(KLJN_HAVE_AVX2_BUILD)
constexpr Table kAvx2Table = {
    avx2::sub_scale,  avx2::scale_add,   avx2::multiply,    avx2::scale,
    avx2::add_scalar, avx2::accumulate,  avx2::sum,         avx2::sum_squares,
    avx2::sum_sq_diff, avx2::power_sums, avx2::sign_pm1,    avx2::first_mismatch,
};
#endif

bool cpu_has_avx2() {
#if defined(KLJN_HAVE_AVX2_BUILD) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend detect_backend() {
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

const Table* table_for(Backend b) {
#if defined(KLJN_HAVE_AVX2_BUILD)
    if (b == Backend::avx2) return &kAvx2Table;
#else
    (void)b;
#endif
    return &kScalarTable;
}

Backend g_backend = detect_backend();
const Table* g_table = table_for(g_backend);

}  // namespace

Backend active_backend() { return g_backend; }

bool set_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2()) return false;
    g_backend = b;
    g_table = table_for(b);
    return true;
}

void reset_backend() { set_backend(detect_backend()); }

std::string_view backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void sub_scale(double* dst, const double* x, const double* y, double c, std::size_t n) {
    g_table->sub_scale(dst, x, y, c, n);
}

void scale_add(double* dst, const double* x, double c, const double* y, std::size_t n) {
    g_table->scale_add(dst, x, c, y, n);
}

void multiply(double* dst, const double* x, const double* y, std::size_t n) {
    g_table->multiply(dst, x, y, n);
}

void scale(double* dst, const double* x, double c, std::size_t n) {
    g_table->scale(dst, x, c, n);
}

void add_scalar(double* dst, const double* x, double c, std::size_t n) {
    g_table->add_scalar(dst, x, c, n);
}

void accumulate(double* acc, const double* x, std::size_t n) {
    g_table->accumulate(acc, x, n);
}

double sum(const double* x, std::size_t n) { return g_table->sum(x, n); }

double sum_squares(const double* x, std::size_t n) { return g_table->sum_squares(x, n); }

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
    return g_table->sum_sq_diff(x, y, n);
}

RawMoments power_sums(const double* x, std::size_t n) { return g_table->power_sums(x, n); }

void sign_pm1(std::int8_t* dst, const double* x, std::size_t n) {
    g_table->sign_pm1(dst, x, n);
}

std::size_t first_mismatch(const std::int8_t* a, const std::int8_t* b, std::size_t n) {
    return g_table->first_mismatch(a, b, n);
}

}  // namespace kljn::kern
