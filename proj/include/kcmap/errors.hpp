#pragma once

#include <stdexcept>
#include <string>

namespace kcmap {

// Problems with input files or their contents. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures inside a computation stage on otherwise valid inputs. Exit code 3.
class ComputationError : public std::runtime_error {
public:
    explicit ComputationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace kcmap
