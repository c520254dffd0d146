#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fid {

/// Reads a single sample: plain text one observation per line, or CSV with a
/// `value` header. Values must be finite; throws std::runtime_error with the
/// offending line number otherwise.
std::vector<double> read_values(const std::string& path);

/// Reads a two-sample CSV with header `group,value`; groups are 1 and 2.
std::pair<std::vector<double>, std::vector<double>> read_groups(
    const std::string& path);

}  // namespace fid
