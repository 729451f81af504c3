#pragma once

#include <filesystem>
#include <string>

#include "glab/harness/record.hpp"

namespace glab {

/// Shortest decimal that round-trips; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);

std::string to_csv(const ExperimentRecord& record);
/// Config echo, seeds, skips, summary and column list, pretty-printed with
/// sorted keys so that equal records give equal bytes.
std::string to_json(const ExperimentRecord& record);

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path json;
};

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json, creating `dir` if needed.
OutputPaths write_record(const ExperimentRecord& record, const std::filesystem::path& dir);

}  // namespace glab
