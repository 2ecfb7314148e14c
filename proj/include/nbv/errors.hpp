#pragma once
#include <stdexcept>
#include <string>

namespace nbv {

struct ZeroDirection : std::invalid_argument {
    ZeroDirection() : std::invalid_argument("direction field is identically zero") {}
};

struct BracketFailureLow : std::runtime_error {
    explicit BracketFailureLow(const std::string& what) : std::runtime_error(what) {}
};

struct BracketFailureHigh : std::runtime_error {
    explicit BracketFailureHigh(const std::string& what) : std::runtime_error(what) {}
};

struct MissingDerivative : std::runtime_error {
    MissingDerivative() : std::runtime_error("nonlinearity carries no derivative evaluator") {}
};

struct AuditFailed : std::runtime_error {
    explicit AuditFailed(const std::string& what) : std::runtime_error(what) {}
};

struct AllRestartsFailed : std::runtime_error {
    explicit AllRestartsFailed(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    int line = 0;
    int col = 0;
    ConfigError(const std::string& what, int line_, int col_)
        : std::runtime_error(what), line(line_), col(col_) {}
};

} // namespace nbv
