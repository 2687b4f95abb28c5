#pragma once

#include <stdexcept>

namespace replayguard {

// Packet bytes or field values that violate the wire contract.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Out-of-range parameters, unknown names, malformed config files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Files that cannot be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace replayguard
