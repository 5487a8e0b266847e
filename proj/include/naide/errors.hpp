#pragma once

#include <stdexcept>
#include <string>

namespace naide {

// Invalid dims, k, sigma or other configuration values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Tensor/batch width mismatches.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Non-finite loss or gradient during optimization.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed image or checkpoint files. Also raised for unreadable paths.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace naide
