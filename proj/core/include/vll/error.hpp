#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace vll {

enum class ErrorKind {
    invalid_configuration,
    invalid_argument,
    insufficient_data,
    domain,
    numerical_blowup,
    stiffness,
    invalid_data,
    horizon_too_long,
    range,
    under_resolved_layer,
    invalid_test_function,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. `time()` is set for failures that
/// happen during time integration.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<double> time = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<double> time() const noexcept { return time_; }

private:
    ErrorKind kind_;
    std::optional<double> time_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what,
                       std::optional<double> time = std::nullopt);

} // namespace vll
