#pragma once

#include <stdexcept>

namespace lgvloc {

// Error categories mapped to CLI exit codes: config = 2, io = 3, data = 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lgvloc
