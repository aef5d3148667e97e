#pragma once
// Band-limited Gaussian white noise synthesis and verification. The pipeline
// mirrors a four-step recipe: seeded raw Gaussian series, ensemble averaging,
// spectral zero-padding (anti-aliasing), and scaling to Johnson-noise
// amplitude U_eff^2 = 4 k T R df.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kljn {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K, exact SI

struct NoiseConfig {
    double bandwidth_hz = 500.0;      // df_B
    double temperature_k = 1e18;      // T_eff
    double boltzmann = kBoltzmann;    // k; fixed, not a config-file key
    std::size_t raw_length = 1u << 20;
    std::size_t ensemble_count = 10;
    std::size_t oversample_factor = 2;

    // Nyquist step tau = 1 / (2 df_B); at the default bandwidth, 1 ms.
    double nyquist_dt() const { return 1.0 / (2.0 * bandwidth_hz); }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct NoiseSeries {
    std::vector<double> samples;
    double dt = 1.0;       // seconds
    std::string seed_tag;  // provenance of the generating seed

    std::size_t size() const { return samples.size(); }
};

struct Spectrum {
    std::vector<double> frequencies;  // Hz, strictly increasing from 0
    std::vector<double> density;      // V^2/Hz, one-sided
};

struct MomentStats {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;         // NaN when variance degenerates
    double excess_kurtosis = 0.0;  // NaN when variance degenerates
};

// n >= 2 standard normal samples from the given seed, bit-reproducible.
NoiseSeries generate_raw_gaussian(std::uint64_t seed, std::size_t n, double dt = 1.0);

// Pointwise mean of same-shaped series.
NoiseSeries ensemble_average(const std::vector<NoiseSeries>& series);

// Spectral zero-padding: even-length input, output length * factor, dt /
// factor, in-band content untouched, nothing above the original band.
NoiseSeries anti_alias(const NoiseSeries& series, std::size_t oversample_factor);

// Renormalize to unit RMS, then multiply by sqrt(4 k T R df). The output
// mean square equals the Johnson value exactly regardless of the input's
// variance (so ensemble averaging never biases amplitude).
NoiseSeries scale_to_johnson(const NoiseSeries& series, double resistance_ohm,
                             const NoiseConfig& cfg);

// Welch averaged periodogram, periodic Hann window, 50% overlap, one-sided.
// segment_length must be a power of two no longer than the series.
Spectrum psd_estimate(const NoiseSeries& series, std::size_t segment_length);

// Sample moments; length >= 4 required.
MomentStats gaussianity_stats(const NoiseSeries& series);

double mean_square(const NoiseSeries& series);

// Ensemble-averaged Nyquist-rate series for one generator stream: the
// protocol-facing samples, identical to decimating the anti-aliased series
// back to the Nyquist grid (see tests), without the per-trial FFTs.
NoiseSeries synthesize_nyquist(std::uint64_t stream_seed, std::size_t n,
                               const NoiseConfig& cfg, std::string seed_tag);

// Full verification pipeline: raw -> ensemble average -> anti_alias. The
// result is oversampled by cfg.oversample_factor and still unit-scale.
NoiseSeries synthesize_pipeline(std::uint64_t stream_seed, const NoiseConfig& cfg,
                                std::string seed_tag);

void write_series_csv(const NoiseSeries& series, const std::filesystem::path& path);
void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path);

}  // namespace kljn
