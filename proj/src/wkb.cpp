#include "ptspec/wkb.hpp"

#include "ptspec/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ptspec {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kAxisTol = 1e-9;

double checked_cos(double gamma)
{
    const double c = std::cos(gamma);
    if (!(c > 0.0))
        throw DomainError("WKB needs cos(gamma) > 0, got gamma = " + std::to_string(gamma));
    return c;
}

} // namespace

double wkb_energy(double N, double gamma, int n)
{
    if (!(N > 0.0))
        throw DomainError("WKB needs N > 0");
    if (n < 0)
        throw DomainError("level index must be non-negative");
    const double c = checked_cos(gamma);
    // Ratio of gammas in log form to stay finite for small N.
    const double lg = std::lgamma(1.5 + 1.0 / N) - std::lgamma(1.0 + 1.0 / N);
    const double base = (n + 0.5) * std::sqrt(pi) * std::exp(lg) / c;
    return std::pow(base, 2.0 * N / (N + 2.0));
}

double family_ratio(double N, double gamma1, double gamma2)
{
    if (!(N > 0.0))
        throw DomainError("WKB needs N > 0");
    return std::pow(checked_cos(gamma1) / checked_cos(gamma2), 2.0 * N / (N + 2.0));
}

} // namespace ptspec

namespace ptspec {

namespace {

// sqrt(Q) along a traced line, keeping both arg(ix) and the sign of the root continuous.
class RootTracker {
public:
    RootTracker(const Potential& potential, cplx E) : potential_(potential), E_(E) {}

    struct Sample {
        cplx root;
        double arg_ix;
    };

    Sample at(cplx x, const Sample& near) const
    {
        double a = std::arg(cplx{-x.imag(), x.real()});
        a += 2.0 * pi * std::round((near.arg_ix - a) / (2.0 * pi));
        const cplx q = E_ + potential_.ix_pow_continued(x, a);
        cplx s = std::sqrt(q);
        if (std::abs(s - near.root) > std::abs(s + near.root))
            s = -s;
        return {s, a};
    }

    Sample seed(cplx x) const
    {
        const double a = std::arg(cplx{-x.imag(), x.real()});
        return {std::sqrt(E_ + potential_.ix_pow_continued(x, a)), a};
    }

private:
    const Potential& potential_;
    cplx E_;
};

cplx direction(LineKind kind, cplx root)
{
    const cplx u = kind == LineKind::anti_stokes ? 1.0 / root : cplx{0.0, 1.0} / root;
    return u / std::abs(u);
}

TracedLine trace_line(const RootTracker& tracker, const std::vector<cplx>& tps, int start, double phi,
                      LineKind kind, const Box& bounds, const TraceConfig& cfg)
{
    TracedLine line{kind, start, -1, {}, {}};
    const cplx x0 = tps[static_cast<std::size_t>(start)];
    cplx x = x0 + std::polar(cfg.seed_offset, phi);
    RootTracker::Sample s = tracker.seed(x);
    // Orient the root so the field points away from the turning point.
    if (std::real(std::conj(x - x0) * direction(kind, s.root)) < 0.0)
        s.root = -s.root;

    line.points = {x0, x};
    // Local form near a simple zero: int sqrt(Q) = (2/3) sqrt(Q) (x - x0).
    cplx action = 2.0 / 3.0 * s.root * (x - x0);
    line.action = {cplx{0.0, 0.0}, action};

    const double h = cfg.step;
    double length = cfg.seed_offset;
    while (length < cfg.max_length) {
        const auto f = [&](cplx y, RootTracker::Sample& ref) {
            ref = tracker.at(y, ref);
            if (!std::isfinite(std::abs(ref.root)) || std::abs(ref.root) == 0.0)
                throw TracingStall("sqrt(Q) vanished or overflowed while tracing");
            return direction(kind, ref.root);
        };
        RootTracker::Sample r1 = s, r2 = s, r3 = s, r4 = s;
        const cplx k1 = f(x, r1);
        r2 = r1;
        const cplx k2 = f(x + 0.5 * h * k1, r2);
        r3 = r2;
        const cplx k3 = f(x + 0.5 * h * k2, r3);
        r4 = r3;
        const cplx k4 = f(x + h * k3, r4);
        const cplx x_new = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (std::real(std::conj(k1) * k4) < 0.0)
            throw TracingStall("direction reversed within one step");

        RootTracker::Sample mid = tracker.at(0.5 * (x + x_new), r1);
        RootTracker::Sample end = tracker.at(x_new, mid);
        action += (x_new - x) / 6.0 * (r1.root + 4.0 * mid.root + end.root);
        x = x_new;
        s = end;
        length += h;
        line.points.push_back(x);
        line.action.push_back(action);

        if (!bounds.contains(x))
            break;
        bool captured = false;
        for (std::size_t j = 0; j < tps.size(); ++j) {
            if (static_cast<int>(j) == start && length < 10.0 * cfg.capture_radius)
                continue;
            if (std::abs(x - tps[j]) < cfg.capture_radius) {
                const cplx last = x;
                RootTracker::Sample m = tracker.at(0.5 * (last + tps[j]), s);
                action += (tps[j] - last) / 6.0 * (s.root + 4.0 * m.root);
                line.points.push_back(tps[j]);
                line.action.push_back(action);
                line.end_tp = static_cast<int>(j);
                captured = true;
                break;
            }
        }
        if (captured)
            break;
    }
    return line;
}

void trace_kind(StokesDiagram& d, const RootTracker& tracker, const Potential& potential, LineKind kind,
                const Box& bounds, const TraceConfig& cfg)
{
    for (std::size_t i = 0; i < d.turning_points.size(); ++i) {
        const cplx x0 = d.turning_points[i];
        if (!bounds.contains(x0))
            continue;
        // Q'(x0) = N (ix0)^N / x0 = -N E / x0 at a zero of Q.
        const cplx dq = -potential.exponent() * d.energy / x0;
        const double shift = kind == LineKind::anti_stokes ? 0.0 : pi;
        for (int m = 0; m < 3; ++m) {
            const double phi = (shift + 2.0 * pi * m - std::arg(dq)) / 3.0;
            d.lines.push_back(trace_line(tracker, d.turning_points, static_cast<int>(i), phi, kind, bounds, cfg));
        }
    }
}

} // namespace

std::vector<const TracedLine*> StokesDiagram::of_kind(LineKind kind) const
{
    std::vector<const TracedLine*> out;
    for (const auto& l : lines)
        if (l.kind == kind)
            out.push_back(&l);
    return out;
}

StokesDiagram trace_stokes_diagram(const Potential& potential, cplx E, const Box& bounds, LineKind kind,
                                   const TraceConfig& cfg)
{
    if (E == cplx{0.0, 0.0})
        throw DomainError("Stokes diagram needs E != 0");
    if (!(cfg.step > 0.0 && cfg.seed_offset > 0.0 && cfg.max_length > 0.0))
        throw DomainError("trace step, seed offset and length must be positive");
    StokesDiagram d;
    d.energy = E;
    d.turning_points = turning_points(potential, E).points();
    const RootTracker tracker(potential, E);
    trace_kind(d, tracker, potential, kind, bounds, cfg);
    return d;
}

StokesDiagram trace_stokes_diagram(const Potential& potential, cplx E, const Box& bounds, const TraceConfig& cfg)
{
    StokesDiagram d = trace_stokes_diagram(potential, E, bounds, LineKind::stokes, cfg);
    const RootTracker tracker(potential, E);
    trace_kind(d, tracker, potential, LineKind::anti_stokes, bounds, cfg);
    return d;
}

bool crosses_positive_imaginary_axis(const TracedLine& line)
{
    for (std::size_t j = 0; j + 1 < line.points.size(); ++j) {
        const cplx a = line.points[j], b = line.points[j + 1];
        if ((a.real() < 0.0) == (b.real() < 0.0) || a.real() == b.real())
            continue;
        const double t = a.real() / (a.real() - b.real());
        if (a.imag() + t * (b.imag() - a.imag()) > kAxisTol)
            return true;
    }
    return false;
}

nlohmann::json diagram_to_json(const StokesDiagram& d)
{
    const auto pt = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
    nlohmann::json tps = nlohmann::json::array();
    for (cplx z : d.turning_points)
        tps.push_back(pt(z));
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& l : d.lines) {
        nlohmann::json pts = nlohmann::json::array();
        for (cplx z : l.points)
            pts.push_back(pt(z));
        lines.push_back({{"kind", l.kind == LineKind::stokes ? "stokes" : "anti_stokes"},
                         {"start", l.start_tp},
                         {"end", l.end_tp},
                         {"points", pts}});
    }
    return {{"energy", pt(d.energy)}, {"turning_points", tps}, {"lines", lines}};
}

} // namespace ptspec
