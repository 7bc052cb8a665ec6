#pragma once

#include "ptspec/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ptspec {

/// Stokes-line angles of the k-th PT-symmetric wedge pair.
struct StokesAngles {
    double left;
    double right;
};

/// theta_right = -(N - 4k + 2)/(N + 2) * pi/2 and theta_left = -pi - theta_right.
StokesAngles stokes_angles(double N, int k);

/// Angular opening 2 pi/(N + 2) of every Stokes wedge.
double wedge_width(double N);

struct WedgeFamily {
    int k = 1;
    double theta_left = 0.0;
    double theta_right = 0.0;
    double width = 0.0;
    /// Angle of the right turning point of the pair; the left one sits at pi - gamma.
    /// Empty when no turning point falls inside the wedge (possible for N < 2).
    std::optional<double> gamma;
    /// orange, green, pink, yellow for k = 1..4; empty afterwards.
    std::string label;
    /// Wedges for N < 2 are only indicative, their true location depends on E.
    bool hypothetical = false;
    /// Turning-point pair placed at |E_display|^(1/N), when gamma is known.
    std::optional<cplx> turning_right;
    std::optional<cplx> turning_left;
};

/// Highest family index that still forms a pair distinct from the top wedge.
int max_family(double N);

/// Family k for exponent N. Throws DomainError if that pair does not exist.
WedgeFamily wedge_family(double N, int k, double E_display = 1.0);

/// All PT-symmetric wedge pairs for N (k = 1 is always reported, capped at k = 8).
std::vector<WedgeFamily> family_catalog(double N, double E_display = 1.0);

/// Solutions of E = -(ix)^N on the principal sheet.
struct TurningPointSet {
    cplx energy;
    double radius = 0.0;
    /// Sorted ascending, each in (-pi, pi].
    std::vector<double> angles;

    std::vector<cplx> points() const;
};

TurningPointSet turning_points(const Potential& potential, cplx E);

/// Re S(x) of the decaying asymptotic branch psi ~ exp(S). Includes the
/// E-dependent correction terms for N < 2 and N < 2/3.
double decay_exponent(const Potential& potential, cplx E, cplx x);
double decay_exponent(double N, cplx E, cplx x);

/// Maps an angle into (-pi, pi].
double principal_angle(double theta) noexcept;

} // namespace ptspec
