#pragma once

#include <stdexcept>
#include <string>

namespace wflo {

/// Raised for invalid inputs, malformed files, and infeasible instances.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wflo
