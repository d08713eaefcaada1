#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "frbd/ode.hpp"

namespace frbd {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Exact inverse of format_double; throws std::invalid_argument on garbage.
double parse_double(const std::string& s);

/// Write content to path via a temporary file plus rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Emit the named columns of a trajectory as CSV: one header row, comma
/// delimiter, LF line endings, round-trip double formatting. "t" refers to
/// the sample times; any other name must be a recorded channel.
void write_csv(const std::filesystem::path& path, const Trajectory& traj,
               const std::vector<std::string>& columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // one vector per header entry

    bool has(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
    std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
};

CsvTable read_csv(const std::filesystem::path& path);

/// Plain `key = value` report lines, atomically written.
void write_report(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);

/// FNV-1a 64-bit hash (hex string) used for config provenance.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace frbd
