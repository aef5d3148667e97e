#include "kljn/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kljn/csv.hpp"

namespace kljn {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc() || res.ptr != end)
        throw InvalidValueError(key, "expected a non-negative integer, got '" + value + "'");
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc() || res.ptr != end)
        throw InvalidValueError(key, "expected a number, got '" + value + "'");
    return out;
}

double parse_positive(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (!(std::isfinite(v) && v > 0.0))
        throw InvalidValueError(key, "must be positive and finite, got '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw InvalidValueError(key, "expected true/false, got '" + value + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "master_seed",   "trials",        "bep_samples",   "attack_mode",
        "secure_only",   "bandwidth_hz",  "temperature_k", "raw_length",
        "ensemble_count", "oversample_factor", "r_low_ohm", "r_high_ohm",
    };
    return keys;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "master_seed") {
        cfg.master_seed = parse_u64(key, value);
    } else if (key == "trials") {
        cfg.trials = parse_u64(key, value);
        if (cfg.trials < 1) throw InvalidValueError(key, "must be >= 1");
    } else if (key == "bep_samples") {
        cfg.bep_samples = parse_u64(key, value);
        if (cfg.bep_samples < 2) throw InvalidValueError(key, "must be >= 2");
    } else if (key == "attack_mode") {
        if (value == "bilateral")
            cfg.attack_mode = AttackMode::bilateral;
        else if (value == "unilateral")
            cfg.attack_mode = AttackMode::unilateral;
        else
            throw InvalidValueError(key, "expected bilateral or unilateral, got '" + value + "'");
    } else if (key == "secure_only") {
        cfg.secure_only = parse_bool(key, value);
    } else if (key == "bandwidth_hz") {
        cfg.noise.bandwidth_hz = parse_positive(key, value);
    } else if (key == "temperature_k") {
        cfg.noise.temperature_k = parse_positive(key, value);
    } else if (key == "raw_length") {
        cfg.noise.raw_length = parse_u64(key, value);
        if (cfg.noise.raw_length < 4 || cfg.noise.raw_length % 2 != 0)
            throw InvalidValueError(key, "must be even and >= 4");
    } else if (key == "ensemble_count") {
        cfg.noise.ensemble_count = parse_u64(key, value);
        if (cfg.noise.ensemble_count < 1) throw InvalidValueError(key, "must be >= 1");
    } else if (key == "oversample_factor") {
        cfg.noise.oversample_factor = parse_u64(key, value);
        if (cfg.noise.oversample_factor < 1) throw InvalidValueError(key, "must be >= 1");
    } else if (key == "r_low_ohm") {
        cfg.pair.r_low_ohm = parse_positive(key, value);
    } else if (key == "r_high_ohm") {
        cfg.pair.r_high_ohm = parse_positive(key, value);
    } else {
        throw UnknownKeyError(key);
    }
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigIoError("cannot read config file: " + path.string());
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidValueError(path.string() + ":" + std::to_string(lineno),
                                    "expected key=value, got '" + line + "'");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

std::string config_to_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "master_seed=" << cfg.master_seed << '\n';
    out << "trials=" << cfg.trials << '\n';
    out << "bep_samples=" << cfg.bep_samples << '\n';
    out << "attack_mode=" << attack_mode_name(cfg.attack_mode) << '\n';
    out << "secure_only=" << (cfg.secure_only ? "true" : "false") << '\n';
    out << "bandwidth_hz=" << csv::format_double(cfg.noise.bandwidth_hz) << '\n';
    out << "temperature_k=" << csv::format_double(cfg.noise.temperature_k) << '\n';
    out << "raw_length=" << cfg.noise.raw_length << '\n';
    out << "ensemble_count=" << cfg.noise.ensemble_count << '\n';
    out << "oversample_factor=" << cfg.noise.oversample_factor << '\n';
    out << "r_low_ohm=" << csv::format_double(cfg.pair.r_low_ohm) << '\n';
    out << "r_high_ohm=" << csv::format_double(cfg.pair.r_high_ohm) << '\n';
    return out.str();
}

}  // namespace kljn
