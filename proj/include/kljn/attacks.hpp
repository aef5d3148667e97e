#pragma once
// Eve's two compromised-RNG attacks. Bilateral: knowing all four generator
// streams, she matches the sign of the measured power flow against her four
// hypothetical waveforms; mismatches eliminate hypotheses, and a wrong
// hypothesis survives n steps with probability 2^-n. Unilateral: knowing
// only Alice's streams, she reconstructs U_A under both resistor hypotheses
// via U* = U_w + I_w R and reads Bob's resistor off the wire mean square.

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kljn/channel.hpp"

namespace kljn {

// Raised when an attack's premise does not hold (ambiguous residuals,
// unphysical R_p estimate). The harness records it instead of aborting.
struct AttackError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SignSeries {
    std::vector<std::int8_t> bits;  // +1 / -1 only
    double dt = 1.0;

    std::size_t size() const { return bits.size(); }
};

inline constexpr std::size_t kNeverEliminated = std::numeric_limits<std::size_t>::max();

// Hypothesis order used for all per-hypothesis arrays and trace masks.
inline constexpr std::array<BitSituation, 4> kHypothesisOrder = kAllSituations;  // HH, LL, HL, LH

struct BilateralVerdict {
    std::optional<BitSituation> decided_situation;
    std::size_t decision_step = 0;  // Nyquist steps consumed when decided
    // Step at which each hypothesis (kHypothesisOrder) first disagreed with
    // the measured sign sequence; kNeverEliminated if it never did.
    std::array<std::size_t, 4> death_step{};
    // Survivor count after steps 1..n, recorded up to the decision step (or
    // the whole BEP when undecided).
    std::vector<int> surviving_per_step;
};

struct UnilateralVerdict {
    Choice alice_resistor = Choice::L;
    Choice bob_resistor = Choice::H;
    double residual_low = 0.0;   // RMS residual of the "Alice chose R_L" hypothesis
    double residual_high = 0.0;  // RMS residual of the "Alice chose R_H" hypothesis
    double estimated_rp = 0.0;   // ohm, from the wire mean square
    double estimated_rb = 0.0;   // ohm, raw inversion before snapping
};

// +1 where p > 0, -1 where p < 0, +1 at exactly zero.
SignSeries sign_quantize(const PowerSeries& power);

// The four hypothetical power-flow waveforms, indexed by kHypothesisOrder.
std::array<PowerSeries, 4> hypothetical_powers(const GeneratorBank& bank,
                                               const ResistorPair& pair);

BilateralVerdict bilateral_attack(const GeneratorBank& bank, const SignSeries& measured,
                                  const ResistorPair& pair);

// U*(t) = U_w(t) + I_w(t) r; with r = true R_A this is exactly U_A(t).
NoiseSeries reconstruct_alice_voltage(const WireObservation& obs, double r);

// Requires the residual ratio between the two hypotheses to reach 10^3;
// anything less means the premise (known Alice streams) is broken.
UnilateralVerdict unilateral_attack(const NoiseSeries& u_ha_known,
                                    const NoiseSeries& u_la_known,
                                    const WireObservation& obs, const ResistorPair& pair,
                                    const NoiseConfig& cfg);

// R_B = R_A R_p / (R_A - R_p); requires 0 < rp < r_a.
double invert_rp(double rp, double r_a);

// P(n) = 2^-n, the chance a wrong hypothesis sign-matches n steps.
double survival_theory(std::size_t n);

// Trace CSV: step,surviving_count,survivor_mask (mask bits in kHypothesisOrder,
// '1' = still alive).
void write_bilateral_trace_csv(const BilateralVerdict& verdict,
                               const std::filesystem::path& path);

// Residual CSV: hypothesis,rms_residual (rows RL and RH).
void write_unilateral_residuals_csv(const UnilateralVerdict& verdict,
                                    const std::filesystem::path& path);

}  // namespace kljn
