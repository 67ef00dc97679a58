#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace cli {

// CSV writer that stamps a metadata comment line, then a header row.
// All writes go through fmt() so files are byte-reproducible.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& command, std::uint64_t seed,
              std::uint64_t trials, std::uint64_t config_hash,
              const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);

    bool ok() const { return static_cast<bool>(out_); }

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace cli
