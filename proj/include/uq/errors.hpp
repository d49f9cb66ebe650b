#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uq {

// Invalid configuration, bad arguments, schema violations. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training produced a non-finite loss. CLI exit code 3.
struct DivergenceError : std::runtime_error {
    std::size_t epoch;
    explicit DivergenceError(std::size_t epoch_idx)
        : std::runtime_error("training diverged (non-finite loss) at epoch " +
                             std::to_string(epoch_idx)),
          epoch(epoch_idx) {}
};

// File system and parse failures. CLI exit code 4.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uq
