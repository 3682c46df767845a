#pragma once

#include <stdexcept>
#include <string>

namespace recollab {

/// Input data could not be parsed (corpus lines, tensor dumps, JSON documents).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration rejected before any work started.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical or structural failure while running a pipeline stage.
struct ComputeError : std::runtime_error {
  explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace recollab
