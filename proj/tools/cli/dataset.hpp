#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dirquant/sample.hpp"

namespace dirquant::cli {

// Malformed input files and arguments (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetOptions {
  // Two columns (theta, phi) in radians: theta from the Z axis, phi in the
  // XY plane from X.
  bool spherical = false;
  double norm_tolerance = 1e-3;
};

// CSV, one observation per row. Lines starting with '#' and blank lines are
// skipped. Rows are renormalized; rows whose norm is off by more than the
// tolerance are rejected, and the error lists their line numbers.
DirectionalSample parse_dataset(std::string_view text, const DatasetOptions& options = {},
                                const std::string& source = {});
DirectionalSample read_dataset(const std::string& path, const DatasetOptions& options = {});

// Cartesian rows with 17 significant digits.
std::string format_dataset(const DirectionalSample& sample, std::string_view header = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace dirquant::cli
