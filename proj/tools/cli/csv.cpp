#include "cli/csv.hpp"

#include <cstdio>
#include <stdexcept>

#include "cli/util.hpp"

namespace cli {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& command, std::uint64_t seed,
                     std::uint64_t trials, std::uint64_t config_hash,
                     const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open output file '" + path + "'");
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash));
    out_ << "# noma-rep 0.1.0 command=" << command << " seed=" << seed << " trials=" << trials
         << " config_fnv1a=" << hash_hex << "\n";
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::runtime_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

}  // namespace cli
