#include "ptspec/paths.hpp"

#include "ptspec/errors.hpp"

#include <cmath>
#include <numbers>

namespace ptspec {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kHyperbolicA = 0.2;
constexpr double kRationalC = 0.1;
constexpr double kRationalT = 8.0;
constexpr double kFlatAngle = 1e-12;

// Leading term of the asymptotic exponent, |Re i^a x^a / a| with a = N/2 + 1.
double leading_decay(double N, double r, double angle)
{
    const double a = N / 2.0 + 1.0;
    return std::abs(std::cos(a * (pi / 2.0 + angle))) * std::pow(r, a) / a;
}

Contour asymptotic_contour(double N, double theta, double r0, double a)
{
    if (std::abs(theta) < kFlatAngle)
        return Contour::real_axis(r0);
    const bool over = theta > 0.0 && N == std::round(N);
    return Contour::hyperbolic(a, theta, r0 * std::cos(theta), over);
}

} // namespace

double default_contour_angle(double N, int k)
{
    if (k == 1 && N > 1.6 && N < 3.0)
        return 0.0;
    return stokes_angles(N, k).right;
}

Contour select_default_contour(double N, int k, double r0, double vertex)
{
    if (!(N > 0.0))
        throw DomainError("N must be positive");
    if (!(r0 > 0.0))
        throw DomainError("r0 must be positive");
    if (!(vertex > 0.0))
        throw DomainError("vertex depth must be positive");
    if (k < 1 || k > max_family(N))
        throw DomainError("family " + std::to_string(k) + " does not exist for N = " + std::to_string(N));
    const double theta = stokes_angles(N, k).right;
    if (k == 1) {
        if (N <= 1.6)
            return Contour::rational_sqrt(kRationalC, kRationalT, theta, r0 * std::cos(theta));
        if (N < 3.0)
            return Contour::real_axis(r0);
        return Contour::hyperbolic(vertex, theta, r0 * std::cos(theta));
    }
    return asymptotic_contour(N, theta, r0, vertex);
}

Contour select_default_contour(double N, const WedgeFamily& family, double r0, double vertex)
{
    return select_default_contour(N, family.k, r0, vertex);
}

double suggested_r0(double N, double E, double angle, double target, double r_min)
{
    if (!(N > 0.0))
        throw DomainError("N must be positive");
    const double r_tp = std::pow(std::max(std::abs(E), 1e-3), 1.0 / N);
    const double base = leading_decay(N, r_tp, angle);
    if (!(leading_decay(N, 1.0, angle) > 0.0))
        throw DomainError("direction does not decay");
    double r = std::max(r_min, r_tp);
    while (leading_decay(N, r, angle) - base < target) {
        r += 0.05;
        if (r > 1e3)
            throw DomainError("no usable r0 below 1000");
    }
    return r;
}

std::vector<NamedContour> harmonic_paths(double half_width)
{
    const cplx a{-half_width, 0.0}, b{half_width, 0.0};
    return {
        {"real", Contour::real_axis(half_width)},
        {"sym", Contour::knot(a, b, 0.0, 1.0)},
        {"non-sym", Contour::knot(a, b, 0.1, 1.0)},
        {"sin", Contour::sinusoidal(a, b, 1.0, 5.0)},
    };
}

std::vector<NamedContour> six_paths(double N, const SixPathGeometry& g)
{
    const StokesAngles th = stokes_angles(N, 1);
    const cplx A = boundary_point(g.r_ab, th.left), B = boundary_point(g.r_ab, th.right);
    const cplx C = boundary_point(g.r_cd, th.left), D = boundary_point(g.r_cd, th.right);
    const cplx Dp{g.r_cd, 0.0};
    return {
        {"poly AB", Contour::polynomial(A, B, {0.0, 0.08, -0.03, 0.015})},
        {"poly CD", Contour::polynomial(C, D, {0.0, -0.05, 0.02, 0.008})},
        {"sin CD", Contour::sinusoidal(C, D, 0.3, 3.0)},
        {"real C'D'", Contour::real_axis(g.r_cd)},
        {"line CD'", Contour::line(C, Dp)},
        {"cross cut CD", Contour::cross_cut(C, D, g.arc_height)},
    };
}

Contour named_contour(const std::string& name, double N, double r0)
{
    const StokesAngles th = stokes_angles(N, 1);
    const cplx A = boundary_point(r0, th.left), B = boundary_point(r0, th.right);
    if (name == "default")
        return select_default_contour(N, 1, r0);
    if (name == "real")
        return Contour::real_axis(r0);
    if (name == "hyperbolic")
        return Contour::hyperbolic(kHyperbolicA, th.right, r0 * std::cos(th.right));
    if (name == "rational")
        return Contour::rational_sqrt(kRationalC, kRationalT, th.right, r0 * std::cos(th.right));
    if (name == "sin")
        return Contour::sinusoidal(A, B, 1.0, 5.0);
    if (name == "sym")
        return Contour::knot(A, B, 0.0, 1.0);
    if (name == "non-sym")
        return Contour::knot(A, B, 0.1, 1.0);
    if (name == "v")
        return Contour::polyline_v(r0, th.right);
    if (name == "line")
        return Contour::line(A, B);
    static const char* const six[] = {"poly-ab", "poly-cd", "sin-cd", "real-cd", "line-cd", "cross-cut"};
    for (int i = 0; i < 6; ++i)
        if (name == six[i])
            return six_paths(N, SixPathGeometry{4.0, r0, SixPathGeometry{}.arc_height})[i].contour;
    throw InvalidConfig("unknown contour '" + name + "'");
}

} // namespace ptspec
