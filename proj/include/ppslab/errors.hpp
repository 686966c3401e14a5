#ifndef PPSLAB_ERRORS_HPP
#define PPSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ppslab {

/// Thrown when an exact oracle is asked for a problem size beyond its
/// enumeration guard (NK n > 25, Held-Karp m > 20, brute force m > 9).
class InfeasibleOracleError : public std::runtime_error {
public:
    explicit InfeasibleOracleError(const std::string& what) : std::runtime_error(what) {}
};

/// File read/write failure; the message names the path involved.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed serialized instance or config file.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ppslab

#endif // PPSLAB_ERRORS_HPP
