#pragma once

#include "ptspec/contour.hpp"
#include "ptspec/wedges.hpp"

#include <string>
#include <vector>

namespace ptspec {

/// Contour used when the caller does not choose one.
///
/// Family 1: rational-sqrt (c = 1/10, t = 8) for N <= 1.6, the real axis for
/// 1.6 < N < 3, hyperbolic with vertex -i*vertex for N >= 3. Other families get
/// a hyperbolic path whose asymptotes follow their Stokes lines; for integer N
/// an upper pair is reached over the origin, otherwise under it. Endpoints sit
/// at distance r0 along the Stokes lines (at +-r0 for the real axis).
Contour select_default_contour(double N, const WedgeFamily& family, double r0, double vertex = 0.2);
Contour select_default_contour(double N, int k, double r0, double vertex = 0.2);

/// Direction in which select_default_contour sends its right endpoint.
double default_contour_angle(double N, int k);

/// Smallest r >= r_min at which the leading asymptotic exponent along `angle`
/// has dropped by `target` relative to the turning-point radius |E|^(1/N).
double suggested_r0(double N, double E, double angle, double target = 20.0, double r_min = 4.0);

struct NamedContour {
    std::string name;
    Contour contour;
};

/// Half-width at which the N = 2 levels 0-6 sit within about 1e-9 of 2n + 1.
constexpr double kHarmonicHalfWidth = 6.54;

/// Real, sym. (knot), non-sym. (rotated knot) and sinusoidal paths between -L and L.
std::vector<NamedContour> harmonic_paths(double half_width);

struct SixPathGeometry {
    double r_ab = 4.0;
    double r_cd = 6.0;
    double arc_height = 1.766026245535860;
};

/// poly. AB, poly. CD, sin. CD, real C'D', line CD', cross cut CD for family 1.
/// A, B, C, D sit on the Stokes lines; C', D' on the real axis at the CD radius.
std::vector<NamedContour> six_paths(double N, const SixPathGeometry& g = {});

/// Contour by name, e.g. "real", "sin", "poly-cd", "cross-cut". Throws InvalidConfig.
Contour named_contour(const std::string& name, double N, double r0);

} // namespace ptspec
