#pragma once

#include <stdexcept>
#include <string>

namespace confpred {

// malformed user input: bad files, bad flags, bad dataset cells
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// a nonconformity measure cannot score the given configuration
struct MeasureError : std::runtime_error {
  explicit MeasureError(const std::string& msg) : std::runtime_error(msg) {}
};

// model precondition violated: rank deficiency, too few examples, bad epsilon
struct ModelError : std::runtime_error {
  explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace confpred
