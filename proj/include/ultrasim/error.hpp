#pragma once

#include <stdexcept>
#include <string>

namespace ultrasim {

/// Raised for malformed input: size mismatches, unknown labels, violated
/// preconditions. Decision failures are reported as certificates instead.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ultrasim
