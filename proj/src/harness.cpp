#include "kljn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "kljn/config.hpp"
#include "kljn/csv.hpp"
#include "kljn/rng.hpp"

namespace kljn {

namespace {

[[noreturn]] void bad_arg(const std::string& what) { throw std::invalid_argument(what); }

std::string stream_tag(std::uint64_t master, std::uint64_t trial, const char* role) {
    return "m" + std::to_string(master) + "/t" + std::to_string(trial) + "/" + role;
}

std::size_t hypothesis_index(const BitSituation& s) {
    for (std::size_t h = 0; h < kHypothesisOrder.size(); ++h)
        if (kHypothesisOrder[h] == s) return h;
    bad_arg("situation not in hypothesis order");
}

BitSituation rival_secure(const BitSituation& s) {
    return BitSituation{s.bob, s.alice};
}

std::string sanitize_for_csv(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::size_t demo_trial_index(const std::vector<TrialRecord>& records) {
    const BitSituation lh{Choice::L, Choice::H};
    for (const TrialRecord& r : records)
        if (r.true_situation == lh) return r.trial_id;
    for (const TrialRecord& r : records)
        if (r.true_situation.secure()) return r.trial_id;
    return records.front().trial_id;
}

std::size_t psd_segment_length(std::size_t n) {
    std::size_t len = 8;
    while (len * 2 <= n / 8 && len < (1u << 16)) len *= 2;
    return std::min(len, n);
}

}  // namespace

std::string_view attack_mode_name(AttackMode mode) {
    return mode == AttackMode::bilateral ? "bilateral" : "unilateral";
}

void ExperimentConfig::validate() const {
    if (trials < 1) bad_arg("trials must be >= 1");
    if (bep_samples < 2) bad_arg("bep_samples must be >= 2");
    noise.validate();
    pair.validate();
}

GeneratorBank make_generator_bank(std::uint64_t master_seed, std::uint64_t trial_id,
                                  std::size_t bep_samples, const NoiseConfig& cfg,
                                  const ResistorPair& pair) {
    pair.validate();
    auto stream = [&](rng::Stream s, const char* role, double resistance) {
        const std::uint64_t seed = rng::derive_seed(master_seed, trial_id, s);
        return scale_to_johnson(
            synthesize_nyquist(seed, bep_samples, cfg, stream_tag(master_seed, trial_id, role)),
            resistance, cfg);
    };
    GeneratorBank bank;
    bank.u_ha = stream(rng::Stream::u_ha, "u_ha", pair.r_high_ohm);
    bank.u_la = stream(rng::Stream::u_la, "u_la", pair.r_low_ohm);
    bank.u_hb = stream(rng::Stream::u_hb, "u_hb", pair.r_high_ohm);
    bank.u_lb = stream(rng::Stream::u_lb, "u_lb", pair.r_low_ohm);
    return bank;
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial_id) {
    cfg.validate();
    TrialRecord rec;
    rec.trial_id = trial_id;
    rec.true_situation = choose_situation(cfg.master_seed, trial_id);

    const GeneratorBank bank =
        make_generator_bank(cfg.master_seed, trial_id, cfg.bep_samples, cfg.noise, cfg.pair);
    const WireObservation obs = wire_signals(
        bank.alice(rec.true_situation.alice), bank.bob(rec.true_situation.bob),
        cfg.pair.of(rec.true_situation.alice), cfg.pair.of(rec.true_situation.bob));

    if (cfg.attack_mode == AttackMode::bilateral) {
        const SignSeries measured = sign_quantize(power_flow(obs));
        const BilateralVerdict verdict = bilateral_attack(bank, measured, cfg.pair);
        rec.decided = verdict.decided_situation;
        rec.decision_step = verdict.decision_step;
        rec.correct = rec.decided.has_value() && *rec.decided == rec.true_situation;
        if (rec.true_situation.secure()) {
            rec.crack_step =
                verdict.death_step[hypothesis_index(rival_secure(rec.true_situation))];
        } else {
            rec.crack_step = rec.decided ? rec.decision_step : kNeverEliminated;
        }
    } else {
        try {
            const UnilateralVerdict v =
                unilateral_attack(bank.u_ha, bank.u_la, obs, cfg.pair, cfg.noise);
            rec.verdict = v;
            rec.correct = v.alice_resistor == rec.true_situation.alice &&
                          v.bob_resistor == rec.true_situation.bob;
            rec.crack_step = cfg.bep_samples;
        } catch (const AttackError& e) {
            rec.error = e.what();
        }
    }
    return rec;
}

ExperimentResult monte_carlo(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    result.records.reserve(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t)
        result.records.push_back(run_trial(cfg, t));

    SurvivalHistogram& hist = result.histogram;
    hist.tau_s = cfg.noise.nyquist_dt();
    std::vector<std::size_t> crack_steps;
    for (const TrialRecord& rec : result.records) {
        if (rec.true_situation.secure()) ++hist.secure_trials;
        if (cfg.secure_only && !rec.true_situation.secure()) continue;
        crack_steps.push_back(rec.crack_step);
    }
    hist.included_trials = crack_steps.size();

    std::size_t max_step = 0;
    for (std::size_t c : crack_steps)
        if (c != kNeverEliminated) max_step = std::max(max_step, c);
    hist.ambiguous.assign(max_step + 1, 0);
    hist.newly_cracked.assign(max_step + 1, 0);
    hist.theory.resize(max_step + 1);
    for (std::size_t n = 0; n <= max_step; ++n) {
        hist.theory[n] = survival_theory(n);
        for (std::size_t c : crack_steps) {
            if (c > n) ++hist.ambiguous[n];
            if (c == n) ++hist.newly_cracked[n];
        }
    }
    return result;
}

std::vector<TheoryPoint> theory_overlay(std::size_t max_n, double tau_s) {
    std::vector<TheoryPoint> points;
    points.reserve(max_n + 1);
    for (std::size_t n = 0; n <= max_n; ++n)
        points.push_back({n, static_cast<double>(n) * tau_s, survival_theory(n)});
    return points;
}

namespace {

void write_manifest(const ExperimentConfig& cfg, const ExperimentResult& result,
                    const std::filesystem::path& path) {
    std::size_t decided = 0, correct = 0, errors = 0;
    for (const TrialRecord& rec : result.records) {
        if (rec.decided || rec.verdict) ++decided;
        if (rec.correct) ++correct;
        if (!rec.error.empty()) ++errors;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << config_to_text(cfg);
    out << '\n';
    out << "records=" << result.records.size() << '\n';
    out << "secure_trials=" << result.histogram.secure_trials << '\n';
    out << "included_trials=" << result.histogram.included_trials << '\n';
    out << "decided_trials=" << decided << '\n';
    out << "correct_trials=" << correct << '\n';
    out << "error_trials=" << errors << '\n';
    out << "tau_s=" << csv::format_double(result.histogram.tau_s) << '\n';
}

void write_trials_csv(const ExperimentConfig& cfg, const ExperimentResult& result,
                      const std::filesystem::path& path) {
    csv::Writer w(path);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (cfg.attack_mode == AttackMode::bilateral) {
        w.header({"trial_id", "situation", "secure", "decided", "decision_step",
                  "crack_step", "correct"});
        for (const TrialRecord& rec : result.records) {
            w.field(rec.trial_id)
                .field(rec.true_situation.name())
                .field(std::int64_t{rec.true_situation.secure() ? 1 : 0})
                .field(rec.decided ? rec.decided->name() : std::string("none"))
                .field(rec.decision_step)
                .field(rec.crack_step == kNeverEliminated
                           ? std::int64_t{-1}
                           : static_cast<std::int64_t>(rec.crack_step))
                .field(std::int64_t{rec.correct ? 1 : 0});
            w.end_row();
        }
    } else {
        w.header({"trial_id", "situation", "secure", "alice_guess", "bob_guess",
                  "residual_rl", "residual_rh", "estimated_rp", "estimated_rb", "correct",
                  "error"});
        for (const TrialRecord& rec : result.records) {
            const bool ok = rec.verdict.has_value();
            w.field(rec.trial_id)
                .field(rec.true_situation.name())
                .field(std::int64_t{rec.true_situation.secure() ? 1 : 0})
                .field(ok ? std::string(1, choice_letter(rec.verdict->alice_resistor))
                          : std::string("none"))
                .field(ok ? std::string(1, choice_letter(rec.verdict->bob_resistor))
                          : std::string("none"))
                .field(ok ? rec.verdict->residual_low : nan)
                .field(ok ? rec.verdict->residual_high : nan)
                .field(ok ? rec.verdict->estimated_rp : nan)
                .field(ok ? rec.verdict->estimated_rb : nan)
                .field(std::int64_t{rec.correct ? 1 : 0})
                .field(sanitize_for_csv(rec.error));
            w.end_row();
        }
    }
}

void write_survival_csv(const SurvivalHistogram& hist, const std::filesystem::path& path) {
    csv::Writer w(path);
    w.header({"n", "t_s", "ambiguous_frac", "theory_frac", "ambiguous_count"});
    const double denom =
        hist.included_trials ? static_cast<double>(hist.included_trials) : 1.0;
    for (std::size_t n = 0; n < hist.ambiguous.size(); ++n) {
        w.field(n)
            .field(static_cast<double>(n) * hist.tau_s)
            .field(static_cast<double>(hist.ambiguous[n]) / denom)
            .field(hist.theory[n])
            .field(hist.ambiguous[n]);
        w.end_row();
    }
}

void write_crack_csv(const SurvivalHistogram& hist, const std::filesystem::path& path) {
    csv::Writer w(path);
    w.header({"n", "t_s", "cracked_frac", "theory_frac", "newly_cracked_count",
              "cumulative_cracked_count"});
    const double denom =
        hist.included_trials ? static_cast<double>(hist.included_trials) : 1.0;
    std::size_t cumulative = 0;
    for (std::size_t n = 0; n < hist.newly_cracked.size(); ++n) {
        cumulative += hist.newly_cracked[n];
        w.field(n)
            .field(static_cast<double>(n) * hist.tau_s)
            .field(static_cast<double>(cumulative) / denom)
            .field(1.0 - hist.theory[n])
            .field(hist.newly_cracked[n])
            .field(cumulative);
        w.end_row();
    }
}

void write_demo_products(const ExperimentConfig& cfg, const ExperimentResult& result,
                         const std::filesystem::path& out_dir) {
    if (result.records.empty()) {
        csv::Writer bep(out_dir / "bep_waveforms.csv");
        bep.header({"time_s", "u_ha", "u_la", "u_hb", "u_lb", "u_w", "i_w", "p_w"});
        csv::Writer hyp(out_dir / "hypothetical_powers.csv");
        hyp.header({"time_s", "p_hh", "p_ll", "p_hl", "p_lh", "sign_measured"});
        csv::Writer rec(out_dir / "reconstruction.csv");
        rec.header({"time_s", "drop_rl", "drop_rh", "u_star_rl", "u_star_rh", "u_la",
                    "u_ha"});
        csv::Writer psd(out_dir / "psd.csv");
        psd.header({"freq_hz", "density_v2_per_hz"});
        return;
    }

    const std::size_t demo = demo_trial_index(result.records);
    const BitSituation truth = choose_situation(cfg.master_seed, demo);
    const GeneratorBank bank =
        make_generator_bank(cfg.master_seed, demo, cfg.bep_samples, cfg.noise, cfg.pair);
    const WireObservation obs =
        wire_signals(bank.alice(truth.alice), bank.bob(truth.bob),
                     cfg.pair.of(truth.alice), cfg.pair.of(truth.bob));
    const PowerSeries power = power_flow(obs);
    write_bep_csv(bank, obs, power, out_dir / "bep_waveforms.csv");

    const std::array<PowerSeries, 4> powers = hypothetical_powers(bank, cfg.pair);
    const SignSeries signs = sign_quantize(power);
    csv::Writer hyp(out_dir / "hypothetical_powers.csv");
    hyp.header({"time_s", "p_hh", "p_ll", "p_hl", "p_lh", "sign_measured"});
    for (std::size_t i = 0; i < signs.size(); ++i) {
        hyp.field(static_cast<double>(i) * power.dt);
        for (const PowerSeries& p : powers) hyp.field(p.p_w[i]);
        hyp.field(std::int64_t{signs.bits[i]});
        hyp.end_row();
    }

    const NoiseSeries star_low = reconstruct_alice_voltage(obs, cfg.pair.r_low_ohm);
    const NoiseSeries star_high = reconstruct_alice_voltage(obs, cfg.pair.r_high_ohm);
    csv::Writer rec(out_dir / "reconstruction.csv");
    rec.header({"time_s", "drop_rl", "drop_rh", "u_star_rl", "u_star_rh", "u_la", "u_ha"});
    for (std::size_t i = 0; i < obs.u_w.size(); ++i) {
        const double i_w = obs.i_w.samples[i];
        rec.field(static_cast<double>(i) * obs.u_w.dt)
            .field(i_w * cfg.pair.r_low_ohm)
            .field(i_w * cfg.pair.r_high_ohm)
            .field(star_low.samples[i])
            .field(star_high.samples[i])
            .field(bank.u_la.samples[i])
            .field(bank.u_ha.samples[i]);
        rec.end_row();
    }

    if (obs.u_w.size() >= 8) {
        write_spectrum_csv(psd_estimate(obs.u_w, psd_segment_length(obs.u_w.size())),
                           out_dir / "psd.csv");
    } else {
        csv::Writer psd(out_dir / "psd.csv");
        psd.header({"freq_hz", "density_v2_per_hz"});
    }
}

}  // namespace

void export_figures(const ExperimentConfig& cfg, const ExperimentResult& result,
                    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_manifest(cfg, result, out_dir / "manifest.txt");
    write_trials_csv(cfg, result, out_dir / "trials.csv");
    write_survival_csv(result.histogram, out_dir / "survival.csv");
    write_crack_csv(result.histogram, out_dir / "crack.csv");
    write_demo_products(cfg, result, out_dir);
}

}  // namespace kljn
