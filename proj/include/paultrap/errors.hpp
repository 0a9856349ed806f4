#pragma once

#include <stdexcept>
#include <string>

namespace paultrap {

/// Bad input data (nonpositive mass, missing config key, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive integration could not proceed (step-size underflow).
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& msg, double t)
        : std::runtime_error(msg), failing_time(t) {}
    double failing_time;
};

/// A 1/X^2 quadrature ran across a zero of X.
class ZeroCrossingError : public std::runtime_error {
public:
    ZeroCrossingError(const std::string& msg, double t)
        : std::runtime_error(msg), zero_time(t) {}
    double zero_time;
};

/// The two-point boundary value problem is at (or too close to) a caustic.
class DegenerateBvpError : public std::runtime_error {
public:
    DegenerateBvpError(const std::string& msg, double t0, double t1)
        : std::runtime_error(msg), t_start(t0), t_end(t1) {}
    double t_start;
    double t_end;
};

/// A quantity that must be finite came out NaN/Inf.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace paultrap
