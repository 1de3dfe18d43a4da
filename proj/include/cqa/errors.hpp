#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqa {

// Raised when input text (query, instance file, FO sentence) is malformed.
// `position` is a 1-based character offset or line number, depending on the
// producer; it is embedded in what() as well.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t position)
        : std::runtime_error(std::move(message)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Raised when a guarded operation would exceed its configured bound
// (homomorphism/core node caps, repair-enumeration caps, cycle-length bounds).
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(std::string message)
        : std::runtime_error(std::move(message)) {}
};

}  // namespace cqa
