#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "kljn/kernels.hpp"
#include "kljn/rng.hpp"

using namespace kljn;

namespace {

std::vector<double> random_vec(std::uint64_t seed, std::size_t n) {
    std::vector<double> v(n);
    rng::fill_standard_normal(seed, v);
    return v;
}

// Lengths covering every vector-width remainder plus larger buffers.
const std::vector<std::size_t> kLengths = {0, 1, 3, 4, 7, 8, 31, 32, 33, 100, 1000, 4101};

long double ref_sum(const std::vector<double>& x) {
    long double acc = 0.0L;
    for (double v : x) acc += v;
    return acc;
}

long double ref_sum_squares(const std::vector<double>& x) {
    long double acc = 0.0L;
    for (double v : x) acc += static_cast<long double>(v) * v;
    return acc;
}

bool close_rel(double a, long double b, double tol) {
    const long double scale = std::max<long double>(1.0L, std::abs(b));
    return std::abs(a - b) <= tol * scale;
}

struct BackendScope {
    kern::Backend saved;
    explicit BackendScope(kern::Backend b) : saved(kern::active_backend()) {
        REQUIRE(kern::set_backend(b));
    }
    ~BackendScope() { kern::set_backend(saved); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar elementwise kernels produce hand-computed values") {
    const double x[3] = {4.0, 2.0, -1.5};
    const double y[3] = {1.0, 5.0, 0.5};
    double dst[3];

    kern::scalar::sub_scale(dst, x, y, 3.0, 3);
    CHECK(dst[0] == 9.0);
    CHECK(dst[1] == -9.0);
    CHECK(dst[2] == -6.0);

    kern::scalar::scale_add(dst, x, 2.0, y, 3);
    CHECK(dst[0] == 9.0);
    CHECK(dst[1] == 9.0);
    CHECK(dst[2] == -2.5);

    kern::scalar::multiply(dst, x, y, 3);
    CHECK(dst[0] == 4.0);
    CHECK(dst[1] == 10.0);
    CHECK(dst[2] == -0.75);

    kern::scalar::scale(dst, x, -2.0, 3);
    CHECK(dst[0] == -8.0);
    CHECK(dst[1] == -4.0);
    CHECK(dst[2] == 3.0);

    kern::scalar::add_scalar(dst, x, 1.5, 3);
    CHECK(dst[0] == 5.5);
    CHECK(dst[1] == 3.5);
    CHECK(dst[2] == 0.0);

    double acc[3] = {1.0, 1.0, 1.0};
    kern::scalar::accumulate(acc, x, 3);
    CHECK(acc[0] == 5.0);
    CHECK(acc[1] == 3.0);
    CHECK(acc[2] == -0.5);
}

TEST_CASE("scalar reductions produce hand-computed values") {
    const double x[4] = {1.0, 2.0, 3.0, 4.0};
    const double y[4] = {0.0, 1.0, 1.0, 6.0};
    CHECK(kern::scalar::sum(x, 4) == 10.0);
    CHECK(kern::scalar::sum_squares(x, 4) == 30.0);
    CHECK(kern::scalar::sum_sq_diff(x, y, 4) == 10.0);  // 1 + 1 + 4 + 4

    const kern::RawMoments m = kern::scalar::power_sums(x, 4);
    CHECK(m.m1 == 10.0);
    CHECK(m.m2 == 30.0);
    CHECK(m.m3 == 100.0);
    CHECK(m.m4 == 354.0);

    CHECK(kern::scalar::sum(x, 0) == 0.0);
    CHECK(kern::scalar::sum_squares(x, 0) == 0.0);
}

TEST_CASE("sign quantization maps zero and negative zero to +1") {
    const double x[6] = {0.0, -0.0, 1e-300, -1e-300, 5.0, -5.0};
    const std::int8_t expect[6] = {1, 1, 1, -1, 1, -1};
    std::int8_t dst[6];
    kern::scalar::sign_pm1(dst, x, 6);
    CHECK(std::memcmp(dst, expect, 6) == 0);

    std::int8_t dispatched[6];
    kern::sign_pm1(dispatched, x, 6);
    CHECK(std::memcmp(dispatched, expect, 6) == 0);
}

TEST_CASE("first_mismatch finds the earliest difference") {
    for (std::size_t n : kLengths) {
        std::vector<std::int8_t> a(n, 1), b(n, 1);
        for (std::size_t i = 0; i < n; i += 3) a[i] = b[i] = -1;
        CHECK(kern::scalar::first_mismatch(a.data(), b.data(), n) == n);
        CHECK(kern::first_mismatch(a.data(), b.data(), n) == n);
        for (std::size_t pos : {std::size_t{0}, n / 3, n - 1}) {
            if (n == 0) continue;
            std::vector<std::int8_t> c = b;
            c[pos] = static_cast<std::int8_t>(-c[pos]);
            CHECK(kern::scalar::first_mismatch(a.data(), c.data(), n) == pos);
            CHECK(kern::first_mismatch(a.data(), c.data(), n) == pos);
        }
    }
}

TEST_CASE("dispatched elementwise kernels are bit-identical to scalar") {
    for (std::size_t n : kLengths) {
        const std::vector<double> x = random_vec(100 + n, n);
        const std::vector<double> y = random_vec(200 + n, n);
        const double c = 1.7;
        std::vector<double> ref(n), out(n);

        kern::scalar::sub_scale(ref.data(), x.data(), y.data(), c, n);
        kern::sub_scale(out.data(), x.data(), y.data(), c, n);
        CHECK(std::memcmp(ref.data(), out.data(), n * sizeof(double)) == 0);

        kern::scalar::scale_add(ref.data(), x.data(), c, y.data(), n);
        kern::scale_add(out.data(), x.data(), c, y.data(), n);
        CHECK(std::memcmp(ref.data(), out.data(), n * sizeof(double)) == 0);

        kern::scalar::multiply(ref.data(), x.data(), y.data(), n);
        kern::multiply(out.data(), x.data(), y.data(), n);
        CHECK(std::memcmp(ref.data(), out.data(), n * sizeof(double)) == 0);

        kern::scalar::scale(ref.data(), x.data(), c, n);
        kern::scale(out.data(), x.data(), c, n);
        CHECK(std::memcmp(ref.data(), out.data(), n * sizeof(double)) == 0);

        kern::scalar::add_scalar(ref.data(), x.data(), c, n);
        kern::add_scalar(out.data(), x.data(), c, n);
        CHECK(std::memcmp(ref.data(), out.data(), n * sizeof(double)) == 0);

        std::vector<double> acc_ref = y, acc_out = y;
        kern::scalar::accumulate(acc_ref.data(), x.data(), n);
        kern::accumulate(acc_out.data(), x.data(), n);
        CHECK(std::memcmp(acc_ref.data(), acc_out.data(), n * sizeof(double)) == 0);

        std::vector<std::int8_t> s_ref(n), s_out(n);
        kern::scalar::sign_pm1(s_ref.data(), x.data(), n);
        kern::sign_pm1(s_out.data(), x.data(), n);
        CHECK(std::memcmp(s_ref.data(), s_out.data(), n) == 0);
    }
}

TEST_CASE("dispatched reductions match a long-double oracle and scalar") {
    for (std::size_t n : kLengths) {
        const std::vector<double> x = random_vec(300 + n, n);
        const std::vector<double> y = random_vec(400 + n, n);

        CHECK(close_rel(kern::sum(x.data(), n), ref_sum(x), 1e-13));
        CHECK(close_rel(kern::sum_squares(x.data(), n), ref_sum_squares(x), 1e-13));

        long double sq = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            const long double d = static_cast<long double>(x[i]) - y[i];
            sq += d * d;
        }
        CHECK(close_rel(kern::sum_sq_diff(x.data(), y.data(), n), sq, 1e-13));

        long double p1 = 0.0L, p2 = 0.0L, p3 = 0.0L, p4 = 0.0L;
        for (double v : x) {
            const long double l = v;
            p1 += l;
            p2 += l * l;
            p3 += l * l * l;
            p4 += l * l * l * l;
        }
        const kern::RawMoments m = kern::power_sums(x.data(), n);
        CHECK(close_rel(m.m1, p1, 1e-13));
        CHECK(close_rel(m.m2, p2, 1e-13));
        CHECK(close_rel(m.m3, p3, 1e-13));
        CHECK(close_rel(m.m4, p4, 1e-13));

        const kern::RawMoments ms = kern::scalar::power_sums(x.data(), n);
        CHECK(close_rel(m.m2, ms.m2, 1e-13));
    }
}

TEST_CASE("in-place aliasing patterns used by the pipeline are safe") {
    const std::size_t n = 1037;
    const std::vector<double> x = random_vec(7, n);

    std::vector<double> a = x, ref(n);
    kern::scale(a.data(), a.data(), 0.25, n);
    kern::scalar::scale(ref.data(), x.data(), 0.25, n);
    CHECK(std::memcmp(a.data(), ref.data(), n * sizeof(double)) == 0);

    a = x;
    kern::add_scalar(a.data(), a.data(), -3.5, n);
    kern::scalar::add_scalar(ref.data(), x.data(), -3.5, n);
    CHECK(std::memcmp(a.data(), ref.data(), n * sizeof(double)) == 0);
}

TEST_CASE("backend selection is observable and reversible") {
    const kern::Backend initial = kern::active_backend();
    CHECK(kern::backend_name(kern::Backend::scalar) == "scalar");
    CHECK(kern::backend_name(kern::Backend::avx2) == "avx2");

    CHECK(kern::set_backend(kern::Backend::scalar));
    CHECK(kern::active_backend() == kern::Backend::scalar);

    const bool have_avx2 = kern::set_backend(kern::Backend::avx2);
    if (have_avx2) {
        CHECK(kern::active_backend() == kern::Backend::avx2);
    } else {
        CHECK(kern::active_backend() == kern::Backend::scalar);
    }
    kern::reset_backend();
    CHECK(kern::active_backend() == initial);
}

TEST_CASE("forced avx2 backend agrees with scalar when available") {
    if (!kern::set_backend(kern::Backend::avx2)) {
        kern::reset_backend();
        return;  // CPU without AVX2: dispatch already covered by scalar
    }
    BackendScope scope(kern::Backend::avx2);
    const std::size_t n = 4101;
    const std::vector<double> x = random_vec(55, n);
    const std::vector<double> y = random_vec(66, n);
    std::vector<double> ref(n), out(n);
    kern::scalar::sub_scale(ref.data(), x.data(), y.data(), 0.3, n);
    kern::sub_scale(out.data(), x.data(), y.data(), 0.3, n);
    CHECK(std::memcmp(ref.data(), out.data(), n * sizeof(double)) == 0);
    CHECK(close_rel(kern::sum(x.data(), n), ref_sum(x), 1e-13));
}

}  // TEST_SUITE
