#pragma once

#include "ptspec/potential.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ptspec {

enum class ContourKind {
    hyperbolic,
    rational_sqrt,
    sinusoidal,
    knot,
    line,
    real_axis,
    polyline_v,
    polynomial,
    cross_cut,
};

std::string_view to_string(ContourKind kind) noexcept;
ContourKind contour_kind_from_string(std::string_view name);

/// x = p - i sqrt(a^2 + p^2 tan^2 theta), p = Re x, for theta < 0.
/// theta > 0 opens upwards: mirrored through the real axis when `over` (this
/// crosses the positive imaginary axis), otherwise kept under the origin.
struct HyperbolicParams {
    double a;
    double theta;
    bool over = false;
};

/// Im x = (X^2 - c)/sqrt(k X^2 + t) with X = Re x and k = 1/tan^2 theta.
struct RationalSqrtParams {
    double c;
    double t;
    double theta;
};

/// Chord from A to B plus amplitude * sin(2 pi periods (p - p_mid)/span) in Im x.
struct SinusoidalParams {
    double amplitude;
    double periods;
};

/// (p - 2 sin p, p^2) loop laid along the chord AB, dipping `depth` below it,
/// rotated by `rotation` about the chord midpoint.
struct KnotParams {
    double rotation;
    double depth;
    double p_extent;
};

struct LineParams {};

struct RealAxisParams {};

/// Two Stokes rays joined at the origin.
struct PolylineVParams {
    double theta_right;
};

/// Im x = sum_k coeffs[k] (Re x)^k.
struct PolynomialParams {
    std::vector<double> coeffs;
};

/// Circular arc through A, i*height and B. Crosses the positive imaginary axis.
struct CrossCutParams {
    double height;
};

using ContourParams = std::variant<HyperbolicParams, RationalSqrtParams, SinusoidalParams, KnotParams, LineParams,
                                   RealAxisParams, PolylineVParams, PolynomialParams, CrossCutParams>;

/// Differentiable path p -> x(p) in the complex plane.
///
/// Immutable after construction. Kinds whose raw shape does not pass through
/// the requested boundary points (knot, polynomial) are pinned to them by a
/// linear-in-p correction, so point(p_min()) == endpoint_a() and
/// point(p_max()) == endpoint_b() hold for every kind.
class Contour {
public:
    static Contour hyperbolic(double a, double theta_right, double re_extent, bool over = false);
    static Contour rational_sqrt(double c, double t, double theta, double re_extent);
    static Contour sinusoidal(cplx a, cplx b, double amplitude, double periods = 5.0);
    static Contour knot(cplx a, cplx b, double rotation, double depth, double p_extent = 3.0);
    static Contour line(cplx a, cplx b);
    static Contour real_axis(double r_extent);
    static Contour polyline_v(double r0, double theta_right);
    static Contour polynomial(cplx a, cplx b, std::vector<double> coeffs);
    static Contour cross_cut(cplx a, cplx b, double height);

    cplx point(double p) const;
    cplx tangent(double p) const;

    double p_min() const noexcept { return p_min_; }
    double p_max() const noexcept { return p_max_; }
    cplx endpoint_a() const { return point(p_min_); }
    cplx endpoint_b() const { return point(p_max_); }

    ContourKind kind() const noexcept;
    const ContourParams& params() const noexcept { return params_; }
    bool cut_crossing() const noexcept;
    bool is_reversed() const noexcept { return reversed_; }

    /// Parameter values where the tangent jumps (PolylineV vertex).
    std::vector<double> breakpoints() const;

    /// Same path traversed from B to A over the same parameter interval.
    Contour reversed() const;

    /// n + 1 equally spaced samples in p.
    std::vector<cplx> sample(int n) const;

    /// Boundary points the contour was built for (before reversal).
    cplx anchor_a() const noexcept { return anchor_a_; }
    cplx anchor_b() const noexcept { return anchor_b_; }

private:
    Contour(ContourParams params, double p_min, double p_max, cplx anchor_a, cplx anchor_b);

    cplx raw_point(double p) const;
    cplx raw_tangent(double p) const;
    void pin_endpoints();

    ContourParams params_;
    double p_min_;
    double p_max_;
    cplx anchor_a_;
    cplx anchor_b_;
    cplx fix_a_{};
    cplx fix_b_{};
    bool reversed_ = false;
};

/// r e^{i theta}.
cplx boundary_point(double r, double theta);

struct Intersection {
    double p1;
    double p2;
    cplx x;
};

/// Transversal crossings of two paths, excluding shared endpoints. Each point is
/// refined to |x1(p1) - x2(p2)| < 1e-10. Throws DegenerateOverlap when the
/// paths run along each other.
std::vector<Intersection> intersections(const Contour& c1, const Contour& c2, int samples = 2000);

/// Points where a path crosses itself (p1 < p2).
std::vector<Intersection> self_intersections(const Contour& c, int samples = 2000);

/// {kind, params, interval, endpoints, reversed, samples}. `samples` > 0 adds that
/// many equally spaced points (plus the endpoint).
nlohmann::json contour_to_json(const Contour& c, int samples = 0);

/// Rebuilds a contour from contour_to_json output. Throws InvalidConfig on bad input.
Contour contour_from_json(const nlohmann::json& j);

/// Smallest distance from the sampled path to the positive imaginary axis.
double distance_to_cut(const Contour& c, int samples = 4000);

} // namespace ptspec
