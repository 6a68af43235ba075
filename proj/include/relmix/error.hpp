#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace relmix {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or stream. Carries the location where parsing failed.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::uint64_t location, const std::string& what,
               bool byteOffset = false)
        : Error(source + (byteOffset ? ": byte " : ":") + std::to_string(location) + ": " + what),
          source_(source),
          location_(location) {}

    const std::string& source() const noexcept { return source_; }
    /// Line number (1-based) or byte offset, depending on the format.
    std::uint64_t location() const noexcept { return location_; }

private:
    std::string source_;
    std::uint64_t location_;
};

/// A precondition on numeric input was violated (empty corpus, undefined statistic, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace relmix
