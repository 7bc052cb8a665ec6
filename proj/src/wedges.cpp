#include "ptspec/wedges.hpp"

#include "ptspec/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace ptspec {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int kMaxFamilies = 8;
constexpr double kContainmentSlack = 1e-9;

const std::array<const char*, 4> kLabels{"orange", "green", "pink", "yellow"};

void require_positive(double N)
{
    if (!(N > 0.0) || !std::isfinite(N))
        throw DomainError("exponent N must be positive, got " + std::to_string(N));
}

// i^c on the principal branch.
cplx i_pow(double c) { return std::polar(1.0, 0.5 * pi * c); }

} // namespace

double principal_angle(double theta) noexcept
{
    double t = std::remainder(theta, 2.0 * pi);
    if (t <= -pi)
        t += 2.0 * pi;
    return t;
}

StokesAngles stokes_angles(double N, int k)
{
    require_positive(N);
    const double right = -(N - 4.0 * k + 2.0) / (N + 2.0) * (pi / 2.0);
    return {-pi - right, right};
}

double wedge_width(double N)
{
    require_positive(N);
    return 2.0 * pi / (N + 2.0);
}

int max_family(double N)
{
    require_positive(N);
    // The k-th right wedge stays below the top wedge while 4k < 2N + 2.
    const int k = static_cast<int>(std::floor((N + 1.0) / 2.0 - 1e-9));
    return std::clamp(k, 1, kMaxFamilies);
}

std::vector<cplx> TurningPointSet::points() const
{
    std::vector<cplx> out;
    out.reserve(angles.size());
    for (double a : angles)
        out.push_back(std::polar(radius, a));
    return out;
}

TurningPointSet turning_points(const Potential& potential, cplx E)
{
    if (E == cplx{0.0, 0.0})
        throw DomainError("turning points require E != 0");
    const double N = potential.exponent();
    TurningPointSet set;
    set.energy = E;
    set.radius = std::pow(std::abs(E), 1.0 / N);

    // (ix)^N = -E with Log(ix) = (ln|E| + i(arg(-E) + 2 pi j))/N and Im Log(ix) in (-pi, pi].
    const double base = std::arg(-E);
    const int jmax = static_cast<int>(std::ceil(N)) + 1;
    for (int j = -jmax; j <= jmax; ++j) {
        const double arg_ix = (base + 2.0 * pi * j) / N;
        if (arg_ix <= -pi || arg_ix > pi)
            continue;
        set.angles.push_back(principal_angle(arg_ix - pi / 2.0));
    }
    std::sort(set.angles.begin(), set.angles.end());
    return set;
}

WedgeFamily wedge_family(double N, int k, double E_display)
{
    require_positive(N);
    if (k < 1 || k > max_family(N))
        throw DomainError("wedge family " + std::to_string(k) + " does not exist for N = " + std::to_string(N));
    if (!(E_display > 0.0))
        throw DomainError("E_display must be positive");

    WedgeFamily fam;
    fam.k = k;
    const auto angles = stokes_angles(N, k);
    fam.theta_left = angles.left;
    fam.theta_right = angles.right;
    fam.width = wedge_width(N);
    fam.hypothetical = N < 2.0;
    if (k <= static_cast<int>(kLabels.size()))
        fam.label = kLabels[static_cast<std::size_t>(k - 1)];

    const Potential potential(N);
    const auto tps = turning_points(potential, cplx{1.0, 0.0});
    const double half = 0.5 * fam.width + kContainmentSlack;
    double best = half;
    for (double a : tps.angles) {
        const double off = std::abs(a - fam.theta_right);
        if (off < best) {
            best = off;
            fam.gamma = a;
        }
    }
    if (fam.gamma) {
        const double r = std::pow(E_display, 1.0 / N);
        fam.turning_right = std::polar(r, *fam.gamma);
        fam.turning_left = std::polar(r, pi - *fam.gamma);
    }
    return fam;
}

std::vector<WedgeFamily> family_catalog(double N, double E_display)
{
    std::vector<WedgeFamily> out;
    const int kmax = max_family(N);
    for (int k = 1; k <= kmax; ++k)
        out.push_back(wedge_family(N, k, E_display));
    return out;
}

double decay_exponent(double N, cplx E, cplx x)
{
    if (!(N > 0.0))
        throw RegimeError("decay exponent needs N > 0");
    const Potential potential(N);
    return decay_exponent(potential, E, x);
}

double decay_exponent(const Potential& potential, cplx E, cplx x)
{
    const double N = potential.exponent();
    if (!potential.integer_exponent() && on_cut(x))
        throw CutViolation("decay exponent evaluated on the cut");

    // Powers of x use arg(x) in (-3pi/2, pi/2], the sheet on which (ix)^N is principal.
    const cplx ix{-x.imag(), x.real()};
    const double theta = std::arg(ix) - pi / 2.0;
    const double log_r = std::log(std::abs(x));
    const auto x_pow = [&](double b) { return std::exp(b * cplx{log_r, theta}); };

    const double a = N / 2.0 + 1.0;
    cplx S = i_pow(a) * x_pow(a) / a;
    if (N < 2.0)
        S -= E * x_pow(1.0 - N / 2.0) / ((2.0 - N) * i_pow(N / 2.0 + 1.0));
    if (N < 2.0 / 3.0)
        S += E * E * x_pow(1.0 - 1.5 * N) / (8.0 * i_pow(1.5 * N + 1.0) * (1.0 - 1.5 * N));
    return -std::abs(S.real());
}

} // namespace ptspec
