#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ptspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Point lies on the branch cut of (ix)^N and no continuation was requested.
class CutViolation : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (N <= 0, cos(gamma) <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class RegimeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// |psi| exceeded the overflow guard during propagation.
class Overflow : public Error {
public:
    using Error::Error;
};

class SingularNormalEquations : public Error {
public:
    using Error::Error;
};

/// Shooting did not reach the residue tolerance. Carries the best iterate.
class NotConverged : public Error {
public:
    NotConverged(const std::string& what, std::complex<double> best_E, double best_residue, int iterations)
        : Error(what), best_E_(best_E), best_residue_(best_residue), iterations_(iterations) {}

    std::complex<double> best_E() const noexcept { return best_E_; }
    double best_residue() const noexcept { return best_residue_; }
    int iterations() const noexcept { return iterations_; }

private:
    std::complex<double> best_E_;
    double best_residue_;
    int iterations_;
};

class DegenerateOverlap : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class EndpointMismatch : public Error {
public:
    using Error::Error;
};

class ZeroNorm : public Error {
public:
    using Error::Error;
};

class TracingStall : public Error {
public:
    using Error::Error;
};

class NoDegeneracyInRange : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

} // namespace ptspec
