#pragma once

#include <stdexcept>
#include <string>

namespace scorewin {

// Invalid arguments or out-of-range parameters. The CLI maps this to exit 2.
struct ParamError : std::invalid_argument {
  explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or invariant-violating input documents (MDP JSON, CSV inputs).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Rating estimation failures (disconnected grids, unbounded likelihoods).
struct EstimationError : std::runtime_error {
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scorewin
