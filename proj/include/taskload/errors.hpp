#pragma once

#include <stdexcept>
#include <string>

namespace taskload {

// Each category maps to a distinct CLI exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ComparisonFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace taskload
