#pragma once

#include <complex>

namespace ptspec {

using cplx = std::complex<double>;

/// True if x sits on the branch cut of (ix)^N, i.e. the positive imaginary axis.
bool on_cut(cplx x) noexcept;

/// The potential V(x) = -(ix)^N.
///
/// (ix)^N is defined as exp(N Log(ix)) with the principal logarithm, which puts
/// the cut of the potential on the positive imaginary axis of x. Exponents within
/// 1e-12 of an integer are evaluated as exact integer powers and have no cut.
class Potential {
public:
    explicit Potential(double exponent);

    double exponent() const noexcept { return exponent_; }
    bool integer_exponent() const noexcept { return is_integer_; }

    /// (ix)^N on the principal branch. Throws CutViolation on the cut (non-integer N).
    cplx ix_pow(cplx x) const;

    /// (ix)^N on the sheet where arg(ix) = arg_ix (any real value). Used for
    /// analytic continuation across the cut.
    cplx ix_pow_continued(cplx x, double arg_ix) const;

    /// V(x) = -(ix)^N.
    cplx value(cplx x) const { return -ix_pow(x); }

    /// Q(x) = E - V(x) = E + (ix)^N.
    cplx q(cplx E, cplx x) const { return E + ix_pow(x); }

private:
    double exponent_;
    bool is_integer_;
    int int_exponent_;
};

/// z^n by binary exponentiation, n >= 0.
cplx int_pow(cplx z, int n) noexcept;

} // namespace ptspec
