#pragma once

#include <stdexcept>

namespace dfl {

/// Thrown when model vectors of different dimension meet.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown on invalid scenario configuration; the message names the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dfl
