#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kljn/cli.hpp"
#include "kljn/config.hpp"
#include "kljn/kernels.hpp"

using namespace kljn;
namespace fs = std::filesystem;

namespace {

// Redirect cout/cerr so CLI runs stay quiet and their messages are assertable.
struct CaptureStreams {
    std::ostringstream out, err;
    std::streambuf* old_out;
    std::streambuf* old_err;

    CaptureStreams()
        : old_out(std::cout.rdbuf(out.rdbuf())), old_err(std::cerr.rdbuf(err.rdbuf())) {}
    ~CaptureStreams() {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
    }
};

int run_quiet(const std::vector<std::string>& args, std::string* out_text = nullptr,
              std::string* err_text = nullptr) {
    CaptureStreams cap;
    const int code = cli::run(args);
    if (out_text) *out_text = cap.out.str();
    if (err_text) *err_text = cap.err.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

// Drop "wrote <path>" lines, which legitimately differ between output dirs.
std::string without_wrote_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
        if (line.rfind("wrote ", 0) != 0) kept += line + '\n';
    return kept;
}

fs::path fresh_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configuration precedence: file, then --set, then --seed") {
    const fs::path dir = fresh_dir("kljn_cli_precedence");
    const fs::path cfg_path = dir / "exp.cfg";
    {
        std::ofstream f(cfg_path, std::ios::binary);
        f << "# comment line\n";
        f << "master_seed = 5\n";
        f << "trials=77\n";
    }

    const cli::Invocation base = cli::parse_and_validate({"monte-carlo"});
    CHECK(base.subcommand == "monte-carlo");
    CHECK(base.config.master_seed == 1);
    CHECK(base.config.trials == 1000);
    CHECK(base.config.bep_samples == 2000);
    CHECK(base.kernels == "auto");
    CHECK_FALSE(base.seed_override.has_value());

    const cli::Invocation from_file =
        cli::parse_and_validate({"monte-carlo", "--config", cfg_path.string()});
    CHECK(from_file.config.master_seed == 5);
    CHECK(from_file.config.trials == 77);

    const cli::Invocation with_set = cli::parse_and_validate(
        {"monte-carlo", "--config", cfg_path.string(), "--set", "master_seed=7"});
    CHECK(with_set.config.master_seed == 7);
    CHECK(with_set.config.trials == 77);

    const cli::Invocation with_seed =
        cli::parse_and_validate({"monte-carlo", "--config", cfg_path.string(), "--set",
                                 "master_seed=7", "--seed", "9"});
    CHECK(with_seed.config.master_seed == 9);
    REQUIRE(with_seed.seed_override.has_value());
    CHECK(*with_seed.seed_override == 9);

    fs::remove_all(dir);
}

TEST_CASE("output directory resolution: --out beats the environment") {
    const fs::path dir = fresh_dir("kljn_cli_outdir");
    setenv("KLJN_OUT_DIR", (dir / "env").string().c_str(), 1);
    const cli::Invocation env_only = cli::parse_and_validate({"demo-bep"});
    CHECK(env_only.out_dir == dir / "env");
    const cli::Invocation explicit_out =
        cli::parse_and_validate({"demo-bep", "--out", (dir / "flag").string()});
    CHECK(explicit_out.out_dir == dir / "flag");
    unsetenv("KLJN_OUT_DIR");
    const cli::Invocation neither = cli::parse_and_validate({"demo-bep"});
    CHECK(neither.out_dir.empty());
    fs::remove_all(dir);
}

TEST_CASE("usage and configuration failures map to distinct exit codes") {
    std::string out, err;

    CHECK(run_quiet({}) == cli::kUsage);
    CHECK(run_quiet({"bogus-sub"}) == cli::kUsage);
    CHECK(run_quiet({"monte-carlo", "--bogus"}) == cli::kUsage);
    CHECK(run_quiet({"monte-carlo", "--set", "no_equals_sign"}) == cli::kUsage);

    CHECK(run_quiet({"monte-carlo", "--config", "/nonexistent/kljn.cfg"}, &out, &err) ==
          cli::kConfigIo);
    CHECK(err.find("/nonexistent/kljn.cfg") != std::string::npos);

    CHECK(run_quiet({"monte-carlo", "--set", "bogus_key=1"}, &out, &err) ==
          cli::kUnknownKey);
    CHECK(err.find("bogus_key") != std::string::npos);

    CHECK(run_quiet({"monte-carlo", "--set", "bandwidth_hz=-5"}, &out, &err) ==
          cli::kInvalidValue);
    CHECK(err.find("bandwidth_hz") != std::string::npos);

    // Structurally valid entries that break a cross-field invariant.
    CHECK(run_quiet({"monte-carlo", "--set", "r_low_ohm=200000"}) == cli::kInvalidValue);
    CHECK(run_quiet({"monte-carlo", "--set", "trials=0"}) == cli::kInvalidValue);

    CHECK(run_quiet({"--help"}, &out, &err) == cli::kOk);
    CHECK(out.find("monte-carlo") != std::string::npos);
    CHECK(run_quiet({"--version"}, &out, &err) == cli::kOk);
}

TEST_CASE("demo-bep runs a reduced period end to end") {
    const fs::path dir = fresh_dir("kljn_cli_demo");
    std::string out;
    const int code = run_quiet({"demo-bep", "--set", "bep_samples=512", "--set",
                                "ensemble_count=2", "--out", dir.string()},
                               &out);
    CHECK(code == cli::kOk);
    CHECK(out.find("situation") != std::string::npos);
    CHECK(out.find("classified level") != std::string::npos);
    const fs::path csv = dir / "bep_waveforms.csv";
    REQUIRE(fs::exists(csv));
    CHECK(line_count(slurp(csv)) == 512 + 1);
    fs::remove_all(dir);
}

TEST_CASE("attack-bilateral produces a byte-stable trace for a fixed seed") {
    const fs::path dir_a = fresh_dir("kljn_cli_bilateral_a");
    const fs::path dir_b = fresh_dir("kljn_cli_bilateral_b");
    const std::vector<std::string> common = {"attack-bilateral", "--seed", "3",
                                             "--set", "bep_samples=512",
                                             "--set", "ensemble_count=2"};
    std::vector<std::string> args_a = common;
    args_a.insert(args_a.end(), {"--out", dir_a.string()});
    std::vector<std::string> args_b = common;
    args_b.insert(args_b.end(), {"--out", dir_b.string()});

    std::string out_a, out_b;
    CHECK(run_quiet(args_a, &out_a) == cli::kOk);
    CHECK(run_quiet(args_b, &out_b) == cli::kOk);
    CHECK(without_wrote_lines(out_a) == without_wrote_lines(out_b));
    CHECK(out_a.find("decided") != std::string::npos);
    CHECK(slurp(dir_a / "bilateral_trace.csv") == slurp(dir_b / "bilateral_trace.csv"));
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("attack-unilateral recovers both resistors on one period") {
    const fs::path dir = fresh_dir("kljn_cli_unilateral");
    std::string out;
    const int code = run_quiet({"attack-unilateral", "--set", "bep_samples=4096",
                                "--set", "ensemble_count=2", "--out", dir.string()},
                               &out);
    CHECK(code == cli::kOk);
    CHECK(out.find("verdict correct") != std::string::npos);
    const fs::path csv = dir / "unilateral_residuals.csv";
    REQUIRE(fs::exists(csv));
    CHECK(line_count(slurp(csv)) == 3);  // header + RL + RH
    fs::remove_all(dir);
}

TEST_CASE("monte-carlo exports the product set and reports the halving law") {
    const fs::path dir = fresh_dir("kljn_cli_montecarlo");
    std::string out;
    const int code = run_quiet({"monte-carlo", "--set", "trials=60", "--set",
                                "bep_samples=128", "--set", "ensemble_count=2", "--out",
                                dir.string()},
                               &out);
    CHECK(code == cli::kOk);
    CHECK(out.find("trials") != std::string::npos);
    for (const char* name : {"manifest.txt", "trials.csv", "survival.csv", "crack.csv"})
        CHECK(fs::exists(dir / name));
    CHECK(slurp(dir / "manifest.txt").find("trials=60") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("kernel backend selection is validated against the machine") {
    std::string out, err;
    const std::vector<std::string> tail = {"--set", "bep_samples=512", "--set",
                                           "ensemble_count=2"};

    std::vector<std::string> scalar_args = {"demo-bep", "--kernels", "scalar"};
    scalar_args.insert(scalar_args.end(), tail.begin(), tail.end());
    CHECK(run_quiet(scalar_args) == cli::kOk);

    const bool have_avx2 = kern::set_backend(kern::Backend::avx2);
    kern::reset_backend();
    std::vector<std::string> avx2_args = {"demo-bep", "--kernels", "avx2"};
    avx2_args.insert(avx2_args.end(), tail.begin(), tail.end());
    const int avx2_code = run_quiet(avx2_args, &out, &err);
    if (have_avx2) {
        CHECK(avx2_code == cli::kOk);
    } else {
        CHECK(avx2_code == cli::kUsage);
        CHECK(err.find("avx2") != std::string::npos);
    }
    kern::reset_backend();

    CHECK(run_quiet({"demo-bep", "--kernels", "bogus"}) == cli::kUsage);
}

TEST_CASE("noise-check passes on the production-size pipeline") {
    const fs::path dir = fresh_dir("kljn_cli_noisecheck");
    std::string out;
    const int code = run_quiet({"noise-check", "--out", dir.string()}, &out);
    CHECK(code == cli::kOk);
    CHECK(out.find("FAIL") == std::string::npos);
    CHECK(out.find("ok:") != std::string::npos);
    for (const char* name : {"psd.csv", "series_head.csv", "noise_check.txt"})
        CHECK(fs::exists(dir / name));
    const std::string report = slurp(dir / "noise_check.txt");
    CHECK(report.find("raw_length=1048576") != std::string::npos);
    CHECK(report.find("FAIL") == std::string::npos);
    fs::remove_all(dir);
}

}  // TEST_SUITE
