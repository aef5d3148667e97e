#pragma once
// The ideal KLJN core: two parties on a wire, each connecting one of an
// identical resistor pair driven by its own noise generator. Wire voltage
// and current follow U_w = I_w R_B + U_B, I_w = (U_A - U_B)/(R_A + R_B);
// the wire mean square sits on one of three Johnson levels.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "kljn/noise.hpp"

namespace kljn {

enum class Choice : std::uint8_t { H, L };

inline char choice_letter(Choice c) { return c == Choice::H ? 'H' : 'L'; }

struct BitSituation {
    Choice alice = Choice::H;
    Choice bob = Choice::H;

    // HL and LH are the secure situations; HH and LL leak.
    bool secure() const { return alice != bob; }
    std::string name() const { return {choice_letter(alice), choice_letter(bob)}; }

    friend bool operator==(const BitSituation&, const BitSituation&) = default;
};

inline constexpr std::array<BitSituation, 4> kAllSituations = {{
    {Choice::H, Choice::H},
    {Choice::L, Choice::L},
    {Choice::H, Choice::L},
    {Choice::L, Choice::H},
}};

struct ResistorPair {
    double r_low_ohm = 10e3;
    double r_high_ohm = 100e3;

    double of(Choice c) const { return c == Choice::H ? r_high_ohm : r_low_ohm; }

    // Requires 0 < R_L < R_H.
    void validate() const;
};

// The four per-BEP source waveforms; pairwise independent streams.
struct GeneratorBank {
    NoiseSeries u_ha, u_la, u_hb, u_lb;

    const NoiseSeries& alice(Choice c) const { return c == Choice::H ? u_ha : u_la; }
    const NoiseSeries& bob(Choice c) const { return c == Choice::H ? u_hb : u_lb; }
    std::size_t length() const { return u_ha.size(); }
    double dt() const { return u_ha.dt; }
};

struct WireObservation {
    NoiseSeries u_w;  // volts
    NoiseSeries i_w;  // amperes
};

struct PowerSeries {
    std::vector<double> p_w;  // watts, positive = Alice-to-Bob
    double dt = 1.0;
};

enum class Level : std::uint8_t { LL, MID, HH };

std::string_view level_name(Level level);

// Uniform independent resistor choices from the switch stream; deterministic
// in (switch_seed, bep_index) and disjoint from all noise streams.
BitSituation choose_situation(std::uint64_t switch_seed, std::uint64_t bep_index);

WireObservation wire_signals(const NoiseSeries& u_a, const NoiseSeries& u_b,
                             double r_a, double r_b);

PowerSeries power_flow(const WireObservation& obs);

// R_p = R_A R_B / (R_A + R_B)
double parallel_resistance(double r_a, double r_b);

// 4 k T_eff R_p df_B
double theoretical_msv(double r_a, double r_b, const NoiseConfig& cfg);

// Nearest of the three theoretical levels in log distance; the levels are
// multiplicatively separated, so geometric midpoints are the thresholds.
Level classify_level(double msv, const ResistorPair& pair, const NoiseConfig& cfg);

// One-BEP waveform dump: time_s,u_ha,u_la,u_hb,u_lb,u_w,i_w,p_w.
void write_bep_csv(const GeneratorBank& bank, const WireObservation& obs,
                   const PowerSeries& power, const std::filesystem::path& path);

}  // namespace kljn
