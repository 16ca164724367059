#pragma once

#include <stdexcept>
#include <string>

namespace hemtqc {

/// Invalid or inconsistent configuration input. CLI exit code 1.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure during evaluation. CLI exit code 2.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hemtqc
