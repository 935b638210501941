#ifndef ICEBUCKETS_ERRORS_HPP_
#define ICEBUCKETS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ice {

// Invalid structure parameters (non-power-of-two L, zero flows, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input data (trace files, mismatched lengths, empty metrics).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A counter exceeded the configured counting capacity.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ice

#endif  // ICEBUCKETS_ERRORS_HPP_
