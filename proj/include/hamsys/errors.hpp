#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hamsys {

// Error taxonomy. Input problems (DomainError, ValidationError, ConfigError)
// are distinguished from numerical failures so the CLI can map them to
// different exit codes (1 vs 2).

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    std::vector<std::string> violations;

    explicit ValidationError(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "parameter validation failed:";
        for (const auto& x : v) { s += "\n  - "; s += x; }
        return s;
    }
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hamsys
