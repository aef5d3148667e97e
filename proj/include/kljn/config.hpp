#pragma once
// Flat key=value experiment configuration. '#' starts a comment; keys mirror
// the ExperimentConfig/NoiseConfig fields (see configs/default.cfg).

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "kljn/harness.hpp"

namespace kljn {

struct ConfigIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownKeyError : std::runtime_error {
    explicit UnknownKeyError(const std::string& key)
        : std::runtime_error("unknown config key: " + key), key(key) {}
    std::string key;
};

struct InvalidValueError : std::runtime_error {
    InvalidValueError(const std::string& key, const std::string& why)
        : std::runtime_error("invalid value for " + key + ": " + why), key(key) {}
    std::string key;
};

// Documented keys, in file order for manifests.
const std::vector<std::string>& config_keys();

// Apply one key=value pair; throws UnknownKeyError / InvalidValueError.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

// Parse a config file on top of defaults; throws ConfigIoError on I/O
// failure (message includes the path) and the entry errors above.
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Serialize back to key=value lines (manifest body).
std::string config_to_text(const ExperimentConfig& cfg);

}  // namespace kljn
