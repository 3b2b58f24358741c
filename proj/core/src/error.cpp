#include "vll/error.hpp"

namespace vll {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_configuration: return "invalid-configuration";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::domain: return "domain";
    case ErrorKind::numerical_blowup: return "numerical-blowup";
    case ErrorKind::stiffness: return "stiffness";
    case ErrorKind::invalid_data: return "invalid-data";
    case ErrorKind::horizon_too_long: return "horizon-too-long";
    case ErrorKind::range: return "range";
    case ErrorKind::under_resolved_layer: return "under-resolved-layer";
    case ErrorKind::invalid_test_function: return "invalid-test-function";
    }
    return "unknown";
}

static std::string decorate(ErrorKind kind, const std::string& what, std::optional<double> time) {
    std::string msg = std::string(to_string(kind)) + ": " + what;
    if (time) msg += " (t=" + std::to_string(*time) + ")";
    return msg;
}

Error::Error(ErrorKind kind, const std::string& what, std::optional<double> time)
    : std::runtime_error(decorate(kind, what, time)), kind_(kind), time_(time) {}

void fail(ErrorKind kind, const std::string& what, std::optional<double> time) {
    throw Error(kind, what, time);
}

} // namespace vll
