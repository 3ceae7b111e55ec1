#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "mixtest/sample.hpp"

namespace mixtest {

// User-facing input problems (bad files, bad flags); the CLI maps these to
// exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Transform { none, log, sqrt };

Transform parse_transform(const std::string& name);
std::string transform_name(Transform t);

struct ReadOptions {
  // Column selector for delimited tables: a 1-based index or a header name.
  // Without it the file must hold exactly one value per line.
  std::optional<std::string> column;
  Transform transform = Transform::none;
};

// Reads one-value-per-line text or comma/whitespace-delimited tables with an
// optional header row, applies the transform, and validates the sample.
// Errors name the offending line.
Sample read_data(const std::string& path, const ReadOptions& options = {});

}  // namespace mixtest
