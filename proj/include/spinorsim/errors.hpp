#ifndef SPINORSIM_ERRORS_HPP
#define SPINORSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinorsim {

/// Iterative numerics failed to converge or produced an inconsistent result.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A computation would exceed a configured size cap.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or missing run-configuration input; `field` names the offending key.
struct config_error : std::runtime_error {
    std::string field;
    config_error(const std::string& field_, const std::string& msg)
        : std::runtime_error(msg), field(field_) {}
};

} // namespace spinorsim

#endif
