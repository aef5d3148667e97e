#include "kljn/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "kljn/config.hpp"
#include "kljn/csv.hpp"
#include "kljn/kernels.hpp"
#include "kljn/rng.hpp"
#include "kljn/version.hpp"

namespace kljn::cli {

namespace {

struct RawOptions {
    std::string subcommand;
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string kernels = "auto";
};

void attach_common(CLI::App* sub, RawOptions& raw) {
    sub->add_option("--config", raw.config_path, "experiment config file (key=value lines)")
        ->option_text("FILE");
    sub->add_option("--set", raw.sets, "override one config entry (repeatable)")
        ->option_text("KEY=VALUE");
    sub->add_option("--out", raw.out_dir, "directory for data products")->option_text("DIR");
    sub->add_option("--seed", raw.seed, "override master_seed")->option_text("N");
    sub->add_option("--kernels", raw.kernels, "kernel backend (default auto)")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
        ->option_text("auto|scalar|avx2");
}

void build_app(CLI::App& app, RawOptions& raw) {
    app.name("kljn");
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    attach_common(app.add_subcommand(
                      "noise-check",
                      "verify the synthesized noise: amplitude, gaussianity, spectrum"),
                  raw);
    attach_common(app.add_subcommand(
                      "demo-bep",
                      "simulate one bit exchange period and classify the wire level"),
                  raw);
    attach_common(app.add_subcommand(
                      "attack-bilateral",
                      "run the four-hypothesis power-sign attack on one period"),
                  raw);
    attach_common(app.add_subcommand(
                      "attack-unilateral",
                      "run the known-Alice-streams attack on one period"),
                  raw);
    attach_common(app.add_subcommand(
                      "monte-carlo",
                      "run the full experiment and export survival statistics"),
                  raw);
}

Invocation finish(const RawOptions& raw) {
    Invocation inv;
    inv.subcommand = raw.subcommand;
    inv.kernels = raw.kernels;
    if (!raw.config_path.empty()) inv.config = load_config_file(raw.config_path);
    for (const std::string& entry : raw.sets) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects KEY=VALUE, got '" + entry + "'");
        apply_config_entry(inv.config, entry.substr(0, eq), entry.substr(eq + 1));
    }
    if (raw.seed) inv.config.master_seed = *raw.seed;
    inv.seed_override = raw.seed;
    try {
        inv.config.validate();
    } catch (const std::invalid_argument& e) {
        throw InvalidValueError("config", e.what());
    }
    if (!raw.out_dir.empty()) {
        inv.out_dir = raw.out_dir;
    } else if (const char* env = std::getenv("KLJN_OUT_DIR"); env != nullptr && *env != '\0') {
        inv.out_dir = env;
    }
    return inv;
}

bool check_line(std::vector<std::string>& lines, bool ok, const std::string& text) {
    lines.push_back((ok ? "ok:   " : "FAIL: ") + text);
    return ok;
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

struct BandStats {
    double s0 = 0.0;
    double max_in_dev = 0.0;
    double max_out = 0.0;
    double suppression_db = 0.0;
    std::size_t in_bins = 0;
    std::size_t out_bins = 0;
};

BandStats analyze_band_psd(const Spectrum& spec, double bandwidth_hz, double msv) {
    BandStats b;
    b.s0 = msv / bandwidth_hz;
    const double guard = 0.02 * bandwidth_hz;
    for (std::size_t k = 0; k < spec.frequencies.size(); ++k) {
        const double f = spec.frequencies[k];
        if (f >= guard && f <= bandwidth_hz - guard) {
            b.max_in_dev = std::max(b.max_in_dev, std::abs(spec.density[k] / b.s0 - 1.0));
            ++b.in_bins;
        } else if (f >= bandwidth_hz + guard) {
            b.max_out = std::max(b.max_out, spec.density[k]);
            ++b.out_bins;
        }
    }
    b.suppression_db = 10.0 * std::log10(b.max_out / b.s0 + 1e-300);
    return b;
}

std::size_t verification_psd_segment(std::size_t n) {
    std::size_t len = 8;
    while (len * 2 <= n / 512 && len < 4096) len *= 2;
    return std::min(len, n);
}

struct BepContext {
    BitSituation truth;
    GeneratorBank bank;
    WireObservation obs;
    PowerSeries power;
};

BepContext simulate_bep(const ExperimentConfig& cfg, std::size_t trial) {
    BepContext ctx;
    ctx.truth = choose_situation(cfg.master_seed, trial);
    ctx.bank = make_generator_bank(cfg.master_seed, trial, cfg.bep_samples, cfg.noise,
                                   cfg.pair);
    ctx.obs = wire_signals(ctx.bank.alice(ctx.truth.alice), ctx.bank.bob(ctx.truth.bob),
                           cfg.pair.of(ctx.truth.alice), cfg.pair.of(ctx.truth.bob));
    ctx.power = power_flow(ctx.obs);
    return ctx;
}

int run_noise_check(const Invocation& inv) {
    const ExperimentConfig& cfg = inv.config;
    const std::uint64_t seed =
        rng::derive_seed(cfg.master_seed, 0, rng::Stream::scratch);
    const NoiseSeries pipeline = synthesize_pipeline(
        seed, cfg.noise, "m" + std::to_string(cfg.master_seed) + "/noise-check");
    const NoiseSeries johnson =
        scale_to_johnson(pipeline, cfg.pair.r_high_ohm, cfg.noise);

    const double msv = mean_square(johnson);
    const double expected = 4.0 * cfg.noise.boltzmann * cfg.noise.temperature_k *
                            cfg.pair.r_high_ohm * cfg.noise.bandwidth_hz;
    const double rel = std::abs(msv / expected - 1.0);
    const MomentStats stats = gaussianity_stats(johnson);
    const Spectrum psd =
        psd_estimate(johnson, verification_psd_segment(johnson.size()));
    const BandStats band = analyze_band_psd(psd, cfg.noise.bandwidth_hz, msv);

    std::vector<std::string> lines;
    bool ok = true;
    ok &= check_line(lines, rel <= 1e-9,
                     "mean square " + fmt(msv, 10) + " V^2 vs 4kTR df " +
                         fmt(expected, 10) + " (rel err " + fmt(rel, 3) + ")");
    // Oversampled band-limited samples are ~50% correlated, so the effective
    // sample count for the mean is about half the raw count.
    const double mean_sigma = std::sqrt(2.0 * msv / static_cast<double>(johnson.size()));
    ok &= check_line(lines, std::abs(stats.mean) <= 6.0 * mean_sigma,
                     "mean " + fmt(stats.mean, 4) + " V consistent with zero");
    ok &= check_line(lines, std::abs(stats.skewness) <= 0.02,
                     "skewness " + fmt(stats.skewness, 4) + " within 0.02");
    ok &= check_line(lines, std::abs(stats.excess_kurtosis) <= 0.05,
                     "excess kurtosis " + fmt(stats.excess_kurtosis, 4) + " within 0.05");
    ok &= check_line(lines, band.max_in_dev <= 0.20,
                     "in-band density flat within 20% (max dev " +
                         fmt(100.0 * band.max_in_dev, 3) + "%, " +
                         std::to_string(band.in_bins) + " bins)");
    ok &= check_line(lines, band.suppression_db <= -60.0,
                     "out-of-band suppression " + fmt(-band.suppression_db, 4) +
                         " dB >= 60 dB (" + std::to_string(band.out_bins) + " bins)");

    for (const std::string& line : lines) std::cout << line << '\n';
    if (!inv.out_dir.empty()) {
        write_spectrum_csv(psd, inv.out_dir / "psd.csv");
        NoiseSeries head = johnson;
        if (head.size() > 2048) head.samples.resize(2048);
        write_series_csv(head, inv.out_dir / "series_head.csv");
        std::ofstream txt(inv.out_dir / "noise_check.txt", std::ios::binary);
        txt << config_to_text(cfg);
        for (const std::string& line : lines) txt << line << '\n';
        std::cout << "wrote " << (inv.out_dir / "psd.csv").string() << ", series_head.csv, noise_check.txt\n";
    }
    return ok ? kOk : kCheckFailed;
}

int run_demo_bep(const Invocation& inv) {
    const ExperimentConfig& cfg = inv.config;
    const BepContext ctx = simulate_bep(cfg, 0);
    const double r_a = cfg.pair.of(ctx.truth.alice);
    const double r_b = cfg.pair.of(ctx.truth.bob);
    const double msv = mean_square(ctx.obs.u_w);
    const double expected = theoretical_msv(r_a, r_b, cfg.noise);
    const Level level = classify_level(msv, cfg.pair, cfg.noise);
    const Level expected_level =
        ctx.truth.secure() ? Level::MID
                           : (ctx.truth.alice == Choice::H ? Level::HH : Level::LL);

    std::cout << "situation " << ctx.truth.name() << " ("
              << (ctx.truth.secure() ? "secure" : "insecure") << ")\n";
    std::cout << "wire mean square " << fmt(msv, 10) << " V^2, theory "
              << fmt(expected, 10) << " V^2 (rel dev "
              << fmt(msv / expected - 1.0, 3) << ")\n";
    std::cout << "classified level " << level_name(level) << ", expected "
              << level_name(expected_level) << '\n';
    if (expected_level == Level::MID)
        std::cout << "a passive observer sees MID and cannot split HL from LH\n";
    if (!inv.out_dir.empty()) {
        write_bep_csv(ctx.bank, ctx.obs, ctx.power, inv.out_dir / "bep_waveforms.csv");
        std::cout << "wrote " << (inv.out_dir / "bep_waveforms.csv").string() << '\n';
    }
    return level == expected_level ? kOk : kCheckFailed;
}

int run_attack_bilateral(const Invocation& inv) {
    const ExperimentConfig& cfg = inv.config;
    const BepContext ctx = simulate_bep(cfg, 0);
    const SignSeries measured = sign_quantize(ctx.power);
    const BilateralVerdict verdict = bilateral_attack(ctx.bank, measured, cfg.pair);

    std::cout << "true situation " << ctx.truth.name() << '\n';
    for (std::size_t h = 0; h < kHypothesisOrder.size(); ++h) {
        std::cout << "hypothesis " << kHypothesisOrder[h].name() << ": ";
        if (verdict.death_step[h] == kNeverEliminated)
            std::cout << "never eliminated\n";
        else
            std::cout << "eliminated at step " << verdict.death_step[h] << " ("
                      << fmt(static_cast<double>(verdict.death_step[h]) *
                             cfg.noise.nyquist_dt() * 1e3, 4)
                      << " ms)\n";
    }
    if (verdict.decided_situation) {
        std::cout << "decided " << verdict.decided_situation->name() << " after "
                  << verdict.decision_step << " steps\n";
    } else {
        std::cout << "undecided after " << measured.size() << " steps\n";
    }
    if (!inv.out_dir.empty()) {
        write_bilateral_trace_csv(verdict, inv.out_dir / "bilateral_trace.csv");
        std::cout << "wrote " << (inv.out_dir / "bilateral_trace.csv").string() << '\n';
    }
    const bool correct =
        verdict.decided_situation.has_value() && *verdict.decided_situation == ctx.truth;
    std::cout << (correct ? "verdict correct\n" : "verdict wrong or undecided\n");
    return correct ? kOk : kCheckFailed;
}

int run_attack_unilateral(const Invocation& inv) {
    const ExperimentConfig& cfg = inv.config;
    const BepContext ctx = simulate_bep(cfg, 0);
    std::cout << "true situation " << ctx.truth.name() << '\n';
    UnilateralVerdict verdict;
    try {
        verdict = unilateral_attack(ctx.bank.u_ha, ctx.bank.u_la, ctx.obs, cfg.pair,
                                    cfg.noise);
    } catch (const AttackError& e) {
        std::cout << "attack failed: " << e.what() << '\n';
        return kCheckFailed;
    }
    std::cout << "rms residual, Alice=R_L hypothesis: " << fmt(verdict.residual_low, 6)
              << " V\n";
    std::cout << "rms residual, Alice=R_H hypothesis: " << fmt(verdict.residual_high, 6)
              << " V\n";
    std::cout << "Alice resistor: " << choice_letter(verdict.alice_resistor)
              << " (true " << choice_letter(ctx.truth.alice) << ")\n";
    std::cout << "wire R_p estimate " << fmt(verdict.estimated_rp, 8) << " ohm -> R_B "
              << fmt(verdict.estimated_rb, 8) << " ohm\n";
    std::cout << "Bob resistor: " << choice_letter(verdict.bob_resistor) << " (true "
              << choice_letter(ctx.truth.bob) << ")\n";
    if (!inv.out_dir.empty()) {
        write_unilateral_residuals_csv(verdict, inv.out_dir / "unilateral_residuals.csv");
        std::cout << "wrote " << (inv.out_dir / "unilateral_residuals.csv").string()
                  << '\n';
    }
    const bool correct = verdict.alice_resistor == ctx.truth.alice &&
                         verdict.bob_resistor == ctx.truth.bob;
    std::cout << (correct ? "verdict correct\n" : "verdict wrong\n");
    return correct ? kOk : kCheckFailed;
}

int run_monte_carlo(const Invocation& inv) {
    const ExperimentConfig& cfg = inv.config;
    const ExperimentResult result = monte_carlo(cfg);

    std::size_t decided = 0, correct = 0, errors = 0;
    for (const TrialRecord& rec : result.records) {
        if (rec.decided || rec.verdict) ++decided;
        if (rec.correct) ++correct;
        if (!rec.error.empty()) ++errors;
    }
    std::cout << "attack=" << attack_mode_name(cfg.attack_mode) << " trials="
              << result.records.size() << " secure=" << result.histogram.secure_trials
              << " included=" << result.histogram.included_trials << '\n';
    std::cout << "decided=" << decided << " correct=" << correct << " errors=" << errors
              << '\n';
    if (cfg.attack_mode == AttackMode::bilateral) {
        const SurvivalHistogram& hist = result.histogram;
        std::cout << "survival histogram (n, t_ms, ambiguous_frac, theory 2^-n):\n";
        const std::size_t show = std::min<std::size_t>(hist.ambiguous.size(), 11);
        const double denom = hist.included_trials
                                 ? static_cast<double>(hist.included_trials)
                                 : 1.0;
        for (std::size_t n = 1; n < show; ++n) {
            std::cout << "  " << n << "  " << fmt(static_cast<double>(n) * hist.tau_s * 1e3, 4)
                      << "  " << fmt(static_cast<double>(hist.ambiguous[n]) / denom, 4)
                      << "  " << fmt(hist.theory[n], 4) << '\n';
        }
        std::cout << "longest survival " << (hist.ambiguous.size() - 1) << " steps ("
                  << fmt(static_cast<double>(hist.ambiguous.size() - 1) * hist.tau_s * 1e3, 4)
                  << " ms)\n";
    }
    if (!inv.out_dir.empty()) {
        export_figures(cfg, result, inv.out_dir);
        std::cout << "wrote data products to " << inv.out_dir.string() << '\n';
    }
    const bool all_ok = correct == result.records.size();
    std::cout << (all_ok ? "all trials cracked correctly\n"
                         : "some trials not cracked correctly\n");
    return all_ok ? kOk : kCheckFailed;
}

int apply_kernel_choice(const std::string& kernels) {
    if (kernels == "scalar") {
        kern::set_backend(kern::Backend::scalar);
    } else if (kernels == "avx2") {
        if (!kern::set_backend(kern::Backend::avx2)) {
            std::cerr << "error: avx2 kernels not supported on this CPU\n";
            return kUsage;
        }
    } else {
        kern::reset_backend();
    }
    return kOk;
}

int dispatch(const Invocation& inv) {
    if (inv.subcommand == "noise-check") return run_noise_check(inv);
    if (inv.subcommand == "demo-bep") return run_demo_bep(inv);
    if (inv.subcommand == "attack-bilateral") return run_attack_bilateral(inv);
    if (inv.subcommand == "attack-unilateral") return run_attack_unilateral(inv);
    if (inv.subcommand == "monte-carlo") return run_monte_carlo(inv);
    std::cerr << "error: unknown subcommand " << inv.subcommand << '\n';
    return kUsage;
}

}  // namespace

Invocation parse_and_validate(const std::vector<std::string>& args) {
    RawOptions raw;
    CLI::App app{"deterministic KLJN key-exchange simulator and eavesdropper toolkit"};
    build_app(app, raw);
    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("kljn");
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw std::invalid_argument(e.what());
    }
    raw.subcommand = app.get_subcommands().front()->get_name();
    return finish(raw);
}

int run(const std::vector<std::string>& args) {
    RawOptions raw;
    CLI::App app{"deterministic KLJN key-exchange simulator and eavesdropper toolkit"};
    build_app(app, raw);
    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("kljn");
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);  // --help / --version: prints and succeeds
            return kOk;
        }
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    raw.subcommand = app.get_subcommands().front()->get_name();

    Invocation inv;
    try {
        inv = finish(raw);
    } catch (const ConfigIoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigIo;
    } catch (const UnknownKeyError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUnknownKey;
    } catch (const InvalidValueError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidValue;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    if (const int code = apply_kernel_choice(inv.kernels); code != kOk) return code;
    try {
        return dispatch(inv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace kljn::cli
