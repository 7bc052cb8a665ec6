#include "ptspec/potential.hpp"

#include "ptspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptspec {

namespace {
constexpr double kIntegerTol = 1e-12;
constexpr double kCutTol = 1e-14;
} // namespace

bool on_cut(cplx x) noexcept
{
    const double scale = std::max(1.0, std::abs(x));
    return std::abs(x.real()) <= kCutTol * scale && x.imag() > 0.0;
}

cplx int_pow(cplx z, int n) noexcept
{
    cplx result{1.0, 0.0};
    while (n > 0) {
        if (n & 1)
            result *= z;
        z *= z;
        n >>= 1;
    }
    return result;
}

Potential::Potential(double exponent)
    : exponent_(exponent), is_integer_(false), int_exponent_(0)
{
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw DomainError("potential exponent must be a finite positive number, got " + std::to_string(exponent));
    const double rounded = std::round(exponent);
    if (std::abs(exponent - rounded) < kIntegerTol) {
        is_integer_ = true;
        int_exponent_ = static_cast<int>(rounded);
    }
}

cplx Potential::ix_pow(cplx x) const
{
    const cplx ix{-x.imag(), x.real()};
    if (is_integer_)
        return int_pow(ix, int_exponent_);
    if (on_cut(x))
        throw CutViolation("(ix)^N evaluated on the positive imaginary axis");
    if (x == cplx{0.0, 0.0})
        return {0.0, 0.0};
    return std::exp(exponent_ * std::log(ix));
}

cplx Potential::ix_pow_continued(cplx x, double arg_ix) const
{
    const cplx ix{-x.imag(), x.real()};
    if (is_integer_)
        return int_pow(ix, int_exponent_);
    const double r = std::abs(ix);
    if (r == 0.0)
        return {0.0, 0.0};
    return std::polar(std::pow(r, exponent_), exponent_ * arg_ix);
}

} // namespace ptspec
