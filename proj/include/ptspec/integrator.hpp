#pragma once

#include "ptspec/contour.hpp"
#include "ptspec/detail/ddouble.hpp"
#include "ptspec/potential.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace ptspec {

/// psi and its derivative with respect to x (not p).
struct State {
    cplx psi;
    cplx dpsi;
};

/// How (ix)^N is evaluated on contours that cross the positive imaginary axis.
enum class CutPolicy {
    /// Principal branch throughout; the potential jumps where the path meets the cut.
    principal,
    /// arg(ix) tracked continuously along the path.
    continuation,
};

struct IntegratorConfig {
    int stages = 3; // 2 or 3
    int steps = 4000;
    bool record_trajectory = false;
    CutPolicy cut_policy = CutPolicy::principal;

    void validate() const;
};

struct TrajectoryPoint {
    double p;
    cplx x;
    cplx psi;
    cplx dpsi;
};

struct Propagation {
    State final;
    std::vector<TrajectoryPoint> trajectory; // empty unless requested
};

/// psi(A) = 0, psi'(A) = 1e-7.
State default_initial_state() noexcept;

/// Fixed-step Gauss-Legendre integration of psi'' = -(E + (ix)^N) psi along one contour.
///
/// Stage geometry and (ix)^N at the stage nodes do not depend on E, so they are
/// evaluated once here and reused for every energy. Contours flagged as
/// cut-crossing are evaluated by continuing arg(ix) along the path; all other
/// contours use the principal branch.
class ShootingProblem {
public:
    ShootingProblem(const Potential& potential, const Contour& contour, IntegratorConfig cfg = {});

    Propagation propagate(cplx E, State init) const;
    Propagation propagate(cplx E) const { return propagate(E, default_initial_state()); }
    Propagation propagate(const detail::cdd& E, State init) const;

    /// psi at the far endpoint for the default initial state.
    cplx endpoint_psi(cplx E) const;

    /// Same recurrence carried out in double-double arithmetic, with E given to
    /// double-double precision. The node data stay in double, so this evaluates
    /// the same discrete problem with far less rounding noise.
    cplx endpoint_psi(const detail::cdd& E) const;

    const Potential& potential() const noexcept { return potential_; }
    const Contour& contour() const noexcept { return contour_; }
    const IntegratorConfig& config() const noexcept { return cfg_; }

    /// Parameter values of the step grid (steps + 1 entries).
    const std::vector<double>& grid() const noexcept { return grid_p_; }

private:
    template <class C>
    C run(const C& E, State init, std::vector<TrajectoryPoint>* trajectory) const;

    struct StepData {
        double h;
        cplx bd;                 // sum_i b_i d_i
        std::array<cplx, 3> d;   // x'(p) at the stage nodes
        std::array<cplx, 3> v;   // (ix)^N at the stage nodes
        std::array<cplx, 3> c;   // sum_k a_ik d_k
        std::array<cplx, 3> w;   // sum_i b_i d_i a_il
        std::array<std::array<cplx, 3>, 3> m; // sum_k a_ik d_k a_kl
    };

    Potential potential_;
    Contour contour_;
    IntegratorConfig cfg_;
    int s_;
    std::vector<double> grid_p_;
    std::vector<cplx> grid_x_;
    std::vector<StepData> steps_;
};

Propagation propagate(const Potential& potential, cplx E, const Contour& contour, State init,
                      const IntegratorConfig& cfg = {});

/// |psi| at the end of the path.
double residue(const State& final) noexcept;

/// Rows p, Re x, Im x, Re psi, Im psi.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& trajectory);

} // namespace ptspec
