#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

// Caller broke a documented precondition.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input too close to a singular configuration for double precision.
class PrecisionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalInstability : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File-system failure or refusal, message carries the path.
class IoError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Too few points above the Monte-Carlo noise floor to fit anything.
class InsufficientData : public std::invalid_argument {
public:
    InsufficientData(const std::string& what, double noise_floor)
        : std::invalid_argument(what), noise_floor_(noise_floor) {}
    double noise_floor() const noexcept { return noise_floor_; }

private:
    double noise_floor_;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ContractViolation(msg);
}

}  // namespace horolab
