#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace roadsight {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A value passed to an operation violates its contract (wrong color space,
/// mismatched lengths, empty input, ...).
struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

/// A configuration value is out of range (k > N, bad learner id, bad split fraction, ...).
struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& msg) : Error(msg) {}
};

/// Dataset or file-level failure (unreadable image, missing path, bad manifest).
/// `items` carries one message per offending entry.
struct DataError : Error {
    std::vector<std::string> items;

    explicit DataError(const std::string& msg) : Error(msg) {}
    DataError(const std::string& msg, std::vector<std::string> its)
        : Error(msg), items(std::move(its)) {}
};

}  // namespace roadsight
