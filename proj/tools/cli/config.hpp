#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cli {

// One config file holds one JSON object per command; `load` pulls the
// section for the command being run and applies command-line overrides.
struct RunConfig {
    nlohmann::json section;
    std::string command;
    std::uint64_t seed = 1;
    std::uint64_t trials = 1000000;
    std::string out_path;
    std::uint64_t config_hash = 0;

    // Required/optional field access with config-error diagnostics.
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    std::vector<double> number_list(const std::string& key) const;
    std::vector<long> integer_list(const std::string& key) const;
    std::vector<std::pair<int, int>> pair_list(const std::string& key) const;
    bool has(const std::string& key) const { return section.contains(key); }
};

RunConfig load_config(const std::string& path, const std::string& command,
                      std::optional<std::uint64_t> seed_override,
                      std::optional<std::uint64_t> trials_override,
                      const std::string& out_override);

}  // namespace cli
