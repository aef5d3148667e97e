#pragma once
// Monte Carlo runner: simulate many bit exchange periods, attack each one,
// and aggregate the survival/crack histograms with the 2^-n theory overlay.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kljn/attacks.hpp"
#include "kljn/channel.hpp"

namespace kljn {

enum class AttackMode : std::uint8_t { bilateral, unilateral };

std::string_view attack_mode_name(AttackMode mode);

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    std::size_t trials = 1000;
    std::size_t bep_samples = 2000;
    NoiseConfig noise;
    ResistorPair pair;
    AttackMode attack_mode = AttackMode::bilateral;
    // Keep only HL/LH exchanges in the histogram, as the parties themselves
    // discard the insecure ones.
    bool secure_only = true;

    void validate() const;
};

struct TrialRecord {
    std::size_t trial_id = 0;
    BitSituation true_situation;
    std::optional<BitSituation> decided;        // bilateral
    std::size_t decision_step = 0;              // bilateral, steps consumed
    std::optional<UnilateralVerdict> verdict;   // unilateral
    // Step at which the key bit fell: for secure trials the elimination step
    // of the rival secure hypothesis; for insecure ones the full decision
    // step; the whole BEP for a successful unilateral attack.
    std::size_t crack_step = kNeverEliminated;
    bool correct = false;
    std::string error;  // nonempty when the attack signalled a broken premise
};

struct SurvivalHistogram {
    // Row n: trials still ambiguous after n steps / cracked exactly at n.
    std::vector<std::size_t> ambiguous;      // n = 0..max_step
    std::vector<std::size_t> newly_cracked;  // n = 0..max_step (0 at n=0)
    std::vector<double> theory;              // 2^-n
    std::size_t included_trials = 0;         // histogram population
    std::size_t secure_trials = 0;           // HL/LH count among all trials
    double tau_s = 0.0;
};

struct ExperimentResult {
    std::vector<TrialRecord> records;
    SurvivalHistogram histogram;
};

struct TheoryPoint {
    std::size_t n;
    double t_s;
    double probability;
};

// Sub-seed schedule: each generator stream of trial t uses
// rng::derive_seed(master_seed, t, role); see README.
GeneratorBank make_generator_bank(std::uint64_t master_seed, std::uint64_t trial_id,
                                  std::size_t bep_samples, const NoiseConfig& cfg,
                                  const ResistorPair& pair);

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial_id);

ExperimentResult monte_carlo(const ExperimentConfig& cfg);

std::vector<TheoryPoint> theory_overlay(std::size_t max_n, double tau_s);

// Writes the experiment's data products into out_dir: manifest.txt,
// trials.csv, survival.csv, crack.csv, bep_waveforms.csv,
// hypothetical_powers.csv, reconstruction.csv, psd.csv. Byte-stable for a
// given (config, result).
void export_figures(const ExperimentConfig& cfg, const ExperimentResult& result,
                    const std::filesystem::path& out_dir);

}  // namespace kljn
