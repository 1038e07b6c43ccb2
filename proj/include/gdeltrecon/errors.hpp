#pragma once

#include <stdexcept>
#include <string>

namespace gdeltrecon {

// Unreadable inputs, unwritable outputs, failed downloads of a required file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration values or config files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Nothing left to work on (no fragments, no records after filtering).
class EmptyInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gdeltrecon
