#pragma once

#include <stdexcept>
#include <string>

namespace lumen {

// Error taxonomy mirrors the CLI exit codes: config errors exit 2,
// input-data errors exit 3, numeric failures exit 4.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lumen
