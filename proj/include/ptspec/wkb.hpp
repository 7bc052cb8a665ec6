#pragma once

#include "ptspec/potential.hpp"
#include "ptspec/wedges.hpp"

#include <json.hpp>

#include <vector>

namespace ptspec {

/// E_n ~ [(n + 1/2) sqrt(pi) Gamma(3/2 + 1/N) / (cos(gamma) Gamma(1 + 1/N))]^(2N/(N+2)).
/// Throws DomainError if cos(gamma) <= 0 or n < 0.
double wkb_energy(double N, double gamma, int n);

/// E_n(gamma2)/E_n(gamma1) = [cos(gamma1)/cos(gamma2)]^(2N/(N+2)).
double family_ratio(double N, double gamma1, double gamma2);

enum class LineKind { stokes, anti_stokes };

struct Box {
    double re_min = -3.0;
    double re_max = 3.0;
    double im_min = -3.0;
    double im_max = 3.0;

    bool contains(cplx x) const noexcept
    {
        return x.real() >= re_min && x.real() <= re_max && x.imag() >= im_min && x.imag() <= im_max;
    }
};

struct TraceConfig {
    double step = 1e-3;
    double seed_offset = 1e-4;
    double max_length = 50.0;
    /// Lines ending within this distance of another turning point are joined to it.
    double capture_radius = 5e-3;
};

struct TracedLine {
    LineKind kind;
    int start_tp;          // index into the turning-point list
    int end_tp = -1;       // index of the turning point reached, -1 if none
    std::vector<cplx> points;
    /// Running integral of sqrt(Q) from the starting turning point at each point.
    std::vector<cplx> action;
};

struct StokesDiagram {
    cplx energy;
    std::vector<cplx> turning_points;
    std::vector<TracedLine> lines;

    std::vector<const TracedLine*> of_kind(LineKind kind) const;
};

/// Traces Stokes (Re int sqrt(Q) = 0) or anti-Stokes (Im int sqrt(Q) = 0) lines
/// from every turning point inside `bounds`.
StokesDiagram trace_stokes_diagram(const Potential& potential, cplx E, const Box& bounds, LineKind kind,
                                   const TraceConfig& cfg = {});

/// Both kinds in one diagram.
StokesDiagram trace_stokes_diagram(const Potential& potential, cplx E, const Box& bounds,
                                   const TraceConfig& cfg = {});

/// True if the line passes through Re x = 0 at Im x > 0.
bool crosses_positive_imaginary_axis(const TracedLine& line);

nlohmann::json diagram_to_json(const StokesDiagram& d);

} // namespace ptspec
