#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adaptopt/engine.hpp"

namespace adaptopt {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Column names for a record with n agents in dimension m:
///   t, x<i>_<k>..., v<i>_<k>... (double mode), q<i>_<j> for i < j,
///   then the nine MonitorSample fields (its time column is `monitor_t`).
std::vector<std::string> csv_columns(std::size_t n, std::size_t m, Mode mode);

/// Writes one row per sample, numbers in shortest round-trip decimal form.
/// The record must be annotated.
void write_csv(const RunRecord& record, const std::filesystem::path& path);
std::string to_csv(const RunRecord& record);

/// Inverse of write_csv for every numeric field (steps and segments are not stored).
RunRecord read_csv(const std::filesystem::path& path);
RunRecord parse_csv(const std::string& text);

}  // namespace adaptopt
