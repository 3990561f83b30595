#pragma once

#include <stdexcept>
#include <string>

namespace entroflow {

struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

struct BadValue : std::runtime_error {
    explicit BadValue(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroConditioning : std::runtime_error {
    explicit ZeroConditioning(const std::string& what) : std::runtime_error(what) {}
};

struct NonNullViolation : std::runtime_error {
    explicit NonNullViolation(const std::string& what) : std::runtime_error(what) {}
};

struct PositivityError : std::runtime_error {
    explicit PositivityError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownModel : std::runtime_error {
    explicit UnknownModel(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyEnsemble : std::runtime_error {
    explicit EmptyEnsemble(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entroflow
