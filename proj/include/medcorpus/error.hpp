#pragma once

#include <stdexcept>
#include <string>

namespace medcorpus {

// Bad input data: malformed records, unreadable files, inconsistent alignments.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration or flag values.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace medcorpus
