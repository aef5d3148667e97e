#include "kljn/noise.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "kljn/csv.hpp"
#include "kljn/kernels.hpp"
#include "kljn/rng.hpp"

namespace kljn {

namespace {

[[noreturn]] void bad_arg(const std::string& what) { throw std::invalid_argument(what); }

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void NoiseConfig::validate() const {
    if (!positive_finite(bandwidth_hz)) bad_arg("bandwidth_hz must be positive and finite");
    if (!positive_finite(temperature_k)) bad_arg("temperature_k must be positive and finite");
    if (!positive_finite(boltzmann)) bad_arg("boltzmann must be positive and finite");
    if (raw_length < 4 || raw_length % 2 != 0) bad_arg("raw_length must be even and >= 4");
    if (ensemble_count < 1) bad_arg("ensemble_count must be >= 1");
    if (oversample_factor < 1) bad_arg("oversample_factor must be >= 1");
}

NoiseSeries generate_raw_gaussian(std::uint64_t seed, std::size_t n, double dt) {
    if (n < 2) bad_arg("raw series length must be >= 2");
    if (!positive_finite(dt)) bad_arg("dt must be positive and finite");
    NoiseSeries out;
    out.samples.resize(n);
    out.dt = dt;
    rng::fill_standard_normal(seed, out.samples);
    return out;
}

NoiseSeries ensemble_average(const std::vector<NoiseSeries>& series) {
    if (series.empty()) bad_arg("ensemble_average needs at least one series");
    const std::size_t n = series.front().size();
    const double dt = series.front().dt;
    if (n == 0) bad_arg("ensemble_average needs non-empty series");
    for (const NoiseSeries& s : series) {
        if (s.size() != n) bad_arg("ensemble_average needs equal-length series");
        if (s.dt != dt) bad_arg("ensemble_average needs a common sample step");
    }
    NoiseSeries out = series.front();
    for (std::size_t i = 1; i < series.size(); ++i)
        kern::accumulate(out.samples.data(), series[i].samples.data(), n);
    kern::scale(out.samples.data(), out.samples.data(),
                1.0 / static_cast<double>(series.size()), n);
    return out;
}

NoiseSeries anti_alias(const NoiseSeries& series, std::size_t oversample_factor) {
    const std::size_t n = series.size();
    if (n < 2 || n % 2 != 0) bad_arg("anti_alias needs an even-length series");
    if (oversample_factor < 1) bad_arg("oversample_factor must be >= 1");
    if (oversample_factor == 1) return series;

    const std::size_t m = n * oversample_factor;
    std::vector<double> in(series.samples);
    std::vector<std::complex<double>> half_in(n / 2 + 1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                         as_fftw(half_in.data()), FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    // Zero-pad the half spectrum. The original Nyquist bin now sits strictly
    // inside the band, so its energy is split between +-n/2; this keeps the
    // interpolant exact at the original sample instants.
    std::vector<std::complex<double>> half_out(m / 2 + 1, {0.0, 0.0});
    for (std::size_t k = 0; k < n / 2; ++k) half_out[k] = half_in[k];
    half_out[n / 2] = 0.5 * half_in[n / 2];

    NoiseSeries out;
    out.samples.resize(m);
    out.dt = series.dt / static_cast<double>(oversample_factor);
    out.seed_tag = series.seed_tag;
    fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(m), as_fftw(half_out.data()),
                                         out.samples.data(), FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    kern::scale(out.samples.data(), out.samples.data(), 1.0 / static_cast<double>(n), m);
    return out;
}

NoiseSeries scale_to_johnson(const NoiseSeries& series, double resistance_ohm,
                             const NoiseConfig& cfg) {
    cfg.validate();
    if (!positive_finite(resistance_ohm)) bad_arg("resistance must be positive and finite");
    if (series.size() == 0) bad_arg("scale_to_johnson needs a non-empty series");
    const double ms = mean_square(series);
    if (!(ms > 0.0)) bad_arg("scale_to_johnson needs a non-degenerate series");
    const double target =
        4.0 * cfg.boltzmann * cfg.temperature_k * resistance_ohm * cfg.bandwidth_hz;
    NoiseSeries out;
    out.samples.resize(series.size());
    out.dt = series.dt;
    out.seed_tag = series.seed_tag;
    kern::scale(out.samples.data(), series.samples.data(), std::sqrt(target / ms),
                series.size());
    return out;
}

Spectrum psd_estimate(const NoiseSeries& series, std::size_t segment_length) {
    const std::size_t n = series.size();
    const std::size_t len = segment_length;
    if (!is_pow2(len) || len < 8) bad_arg("segment_length must be a power of two >= 8");
    if (len > n) bad_arg("segment_length must not exceed the series length");
    if (!positive_finite(series.dt)) bad_arg("series dt must be positive and finite");

    // Periodic Hann window; U = mean(w^2) restores the power the taper eats.
    std::vector<double> window(len);
    double window_power = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                         static_cast<double>(len));
        window_power += window[i] * window[i];
    }
    const double u = window_power / static_cast<double>(len);

    const std::size_t hop = len / 2;
    const std::size_t segments = 1 + (n - len) / hop;

    std::vector<double> buf(len);
    std::vector<std::complex<double>> bins(len / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), buf.data(),
                                          as_fftw(bins.data()), FFTW_ESTIMATE);
    std::vector<double> acc(len / 2 + 1, 0.0);
    for (std::size_t s = 0; s < segments; ++s) {
        const double* seg = series.samples.data() + s * hop;
        kern::multiply(buf.data(), seg, window.data(), len);
        fftw_execute(plan);
        for (std::size_t k = 0; k < bins.size(); ++k) acc[k] += std::norm(bins[k]);
    }
    fftw_destroy_plan(plan);

    const double fs = 1.0 / series.dt;
    const double norm = fs * static_cast<double>(len) * u * static_cast<double>(segments);
    Spectrum spec;
    spec.frequencies.resize(acc.size());
    spec.density.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        const double one_sided = (k == 0 || k == len / 2) ? 1.0 : 2.0;
        spec.frequencies[k] = static_cast<double>(k) * fs / static_cast<double>(len);
        spec.density[k] = one_sided * acc[k] / norm;
    }
    return spec;
}

MomentStats gaussianity_stats(const NoiseSeries& series) {
    const std::size_t n = series.size();
    if (n < 4) bad_arg("gaussianity_stats needs at least 4 samples");
    const double inv_n = 1.0 / static_cast<double>(n);
    MomentStats st;
    st.mean = kern::sum(series.samples.data(), n) * inv_n;

    std::vector<double> centered(n);
    kern::add_scalar(centered.data(), series.samples.data(), -st.mean, n);
    const kern::RawMoments rm = kern::power_sums(centered.data(), n);
    const double m2 = rm.m2 * inv_n;
    const double m3 = rm.m3 * inv_n;
    const double m4 = rm.m4 * inv_n;
    st.variance = m2;
    if (m2 > 0.0) {
        st.skewness = m3 / std::pow(m2, 1.5);
        st.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        st.skewness = std::numeric_limits<double>::quiet_NaN();
        st.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    }
    return st;
}

double mean_square(const NoiseSeries& series) {
    const std::size_t n = series.size();
    if (n == 0) bad_arg("mean_square needs a non-empty series");
    return kern::sum_squares(series.samples.data(), n) / static_cast<double>(n);
}

NoiseSeries synthesize_nyquist(std::uint64_t stream_seed, std::size_t n,
                               const NoiseConfig& cfg, std::string seed_tag) {
    cfg.validate();
    std::vector<NoiseSeries> raws;
    raws.reserve(cfg.ensemble_count);
    for (std::size_t i = 0; i < cfg.ensemble_count; ++i)
        raws.push_back(
            generate_raw_gaussian(rng::derive_seed(stream_seed, i, rng::Stream::raw), n,
                                  cfg.nyquist_dt()));
    NoiseSeries avg = ensemble_average(raws);
    avg.seed_tag = std::move(seed_tag);
    return avg;
}

NoiseSeries synthesize_pipeline(std::uint64_t stream_seed, const NoiseConfig& cfg,
                                std::string seed_tag) {
    cfg.validate();
    NoiseSeries nyquist =
        synthesize_nyquist(stream_seed, cfg.raw_length, cfg, std::move(seed_tag));
    return anti_alias(nyquist, cfg.oversample_factor);
}

void write_series_csv(const NoiseSeries& series, const std::filesystem::path& path) {
    csv::Writer w(path);
    w.header({"time_s", "value_v"});
    for (std::size_t i = 0; i < series.size(); ++i) {
        w.field(static_cast<double>(i) * series.dt).field(series.samples[i]);
        w.end_row();
    }
}

void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path) {
    csv::Writer w(path);
    w.header({"freq_hz", "density_v2_per_hz"});
    for (std::size_t k = 0; k < spec.frequencies.size(); ++k) {
        w.field(spec.frequencies[k]).field(spec.density[k]);
        w.end_row();
    }
}

}  // namespace kljn
