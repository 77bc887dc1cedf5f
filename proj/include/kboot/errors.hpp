#pragma once

#include <stdexcept>
#include <string>

namespace kboot {

// Bad flag values, invalid ranks, unsupported parameter combinations.
// The CLI maps this family to exit code 2.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Unreadable files, parse failures, shape mismatches in user data.
// The CLI maps this family to exit code 3.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Work refused because a combinatorial object exceeds its hard cap.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kboot
