#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hashlearn {

/// IO failure (missing file, short read, write error). The CLI maps these
/// to exit code 2; validation errors (std::invalid_argument) map to 1.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data. Carries the 1-based line number of the offending line.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, uint64_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    uint64_t line() const { return line_; }

private:
    uint64_t line_;
};

} // namespace hashlearn
