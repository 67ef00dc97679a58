#include "cli/config.hpp"

#include <fstream>
#include <sstream>

#include "cli/util.hpp"

namespace cli {

namespace {

[[noreturn]] void bad(const std::string& command, const std::string& what) {
    throw ConfigError("config [" + command + "]: " + what);
}

}  // namespace

double RunConfig::number(const std::string& key) const {
    if (!section.contains(key)) bad(command, "missing required field '" + key + "'");
    if (!section[key].is_number()) bad(command, "field '" + key + "' must be a number");
    return section[key].get<double>();
}

double RunConfig::number_or(const std::string& key, double fallback) const {
    return section.contains(key) ? number(key) : fallback;
}

long RunConfig::integer(const std::string& key) const {
    if (!section.contains(key)) bad(command, "missing required field '" + key + "'");
    if (!section[key].is_number_integer()) bad(command, "field '" + key + "' must be an integer");
    return section[key].get<long>();
}

long RunConfig::integer_or(const std::string& key, long fallback) const {
    return section.contains(key) ? integer(key) : fallback;
}

std::string RunConfig::text_or(const std::string& key, const std::string& fallback) const {
    if (!section.contains(key)) return fallback;
    if (!section[key].is_string()) bad(command, "field '" + key + "' must be a string");
    return section[key].get<std::string>();
}

std::vector<double> RunConfig::number_list(const std::string& key) const {
    if (!section.contains(key)) bad(command, "missing required field '" + key + "'");
    const auto& v = section[key];
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
        return out;
    }
    if (!v.is_array() || v.empty()) bad(command, "field '" + key + "' must be a nonempty array");
    for (const auto& e : v) {
        if (!e.is_number()) bad(command, "field '" + key + "' must contain numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<long> RunConfig::integer_list(const std::string& key) const {
    std::vector<long> out;
    for (double d : number_list(key)) {
        const long l = static_cast<long>(d);
        if (static_cast<double>(l) != d) bad(command, "field '" + key + "' must contain integers");
        out.push_back(l);
    }
    return out;
}

std::vector<std::pair<int, int>> RunConfig::pair_list(const std::string& key) const {
    if (!section.contains(key)) bad(command, "missing required field '" + key + "'");
    const auto& v = section[key];
    if (!v.is_array() || v.empty()) bad(command, "field '" + key + "' must be a nonempty array");
    std::vector<std::pair<int, int>> out;
    for (const auto& e : v) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            bad(command, "field '" + key + "' must contain [int, int] pairs");
        out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return out;
}

RunConfig load_config(const std::string& path, const std::string& command,
                      std::optional<std::uint64_t> seed_override,
                      std::optional<std::uint64_t> trials_override,
                      const std::string& out_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream raw;
    raw << in.rdbuf();
    const std::string bytes = raw.str();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    if (!doc.contains(command))
        throw ConfigError("config: no section for command '" + command + "'");

    RunConfig cfg;
    cfg.section = doc[command];
    cfg.command = command;
    cfg.config_hash = fnv1a64(bytes);
    cfg.trials = static_cast<std::uint64_t>(cfg.integer_or("trials", 1000000));
    cfg.seed = static_cast<std::uint64_t>(cfg.integer_or("seed", 1));
    cfg.out_path = cfg.text_or("out", "");
    if (seed_override) cfg.seed = *seed_override;
    if (trials_override) cfg.trials = *trials_override;
    if (!out_override.empty()) cfg.out_path = out_override;
    if (cfg.out_path.empty()) cfg.out_path = command + (command == "plan" ? ".json" : ".csv");
    if (cfg.trials < 1000) throw ConfigError("config [" + command + "]: trials must be >= 1000");
    return cfg;
}

}  // namespace cli
