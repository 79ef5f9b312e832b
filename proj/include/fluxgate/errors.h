#pragma once

#include <stdexcept>
#include <string>

namespace fluxgate {

// Physics-domain failure: resonance guards, nonexistent SW transformation,
// convergence or integration failures. Mapped to exit code 2 by the CLI.
class PhysicsError : public std::runtime_error {
public:
    PhysicsError(const std::string& module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(module) {}
    const std::string& module() const { return module_; }

private:
    std::string module_;
};

// Malformed configuration. Carries the offending field path. Exit code 1.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

} // namespace fluxgate
