#pragma once

#include <stdexcept>
#include <string>

namespace ivton {

/// Violated input contract: bad dimensions, unknown labels, malformed specs.
class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

/// Failure inside an external model backend (stub or remote).
class BackendError : public std::runtime_error {
public:
    explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ivton
