#pragma once

#include "ptspec/contour.hpp"
#include "ptspec/integrator.hpp"
#include "ptspec/potential.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace ptspec {

struct LMConfig {
    double lambda0 = 1e-3;
    double decrease_factor = 0.70710678118654752440; // 1/sqrt(2)
    double increase_factor = 10.0;
    /// Finite-difference step is fd_rel_step * max(1, |E|).
    double fd_rel_step = 1e-7;
    int max_iters = 200;
    double residue_tol = 1e-13;
    /// When double-precision iterations stall above residue_tol, continue with
    /// the endpoint value evaluated in double-double arithmetic.
    bool extended_precision = true;
    int extended_iters = 12;
    /// Fallback acceptance once both stages stall: the Newton distance |f|/|df/dE|
    /// is below step_tol * max(1, |E|). Zero disables it.
    double step_tol = 1e-12;

    void validate() const;
};

/// 2x2 real Jacobian of (Re f, Im f) with respect to (Re E, Im E).
struct Jacobian {
    double uu_a, uu_b; // du/da, du/db
    double vv_a, vv_b; // dv/da, dv/db
};

Jacobian fd_jacobian(const ShootingProblem& problem, cplx E, double step);

struct LMStep {
    cplx E;        // E_new (unchanged when rejected)
    double lambda; // lambda_new
    double F;      // F at E_new
    bool accepted;
    cplx delta; // proposed step
};

/// One damped Gauss-Newton step on F = |psi(B)|^2. `F` must be |f(E)|^2.
LMStep lm_step(const ShootingProblem& problem, const LMConfig& cfg, cplx E, double lambda, cplx f);

/// Same, with a precomputed Jacobian at E.
LMStep lm_step(const ShootingProblem& problem, const LMConfig& cfg, cplx E, double lambda, cplx f,
               const Jacobian& J);

struct IterationRecord {
    int iteration;
    cplx E;
    double F;
    double lambda;
    bool accepted;
};

enum class Convergence {
    none,
    residue, // |psi(B)| <= residue_tol
    step,    // residue floor above tolerance, E fixed by the Newton distance
};

struct EigenSolution {
    double N = 0.0;
    int family = 1;
    int level = -1; // -1 when not tied to a level index
    cplx E;
    double residue = 0.0;
    int iterations = 0;
    bool converged = false;
    Convergence criterion = Convergence::none;
    bool extended = false; // double-double stage was used
    std::vector<TrajectoryPoint> trajectory;
    std::vector<IterationRecord> trace;
    std::optional<Contour> contour;
};

/// Levenberg-Marquardt shooting from E_guess. Throws NotConverged with the best iterate.
EigenSolution solve_eigenvalue(const ShootingProblem& problem, const LMConfig& cfg, cplx E_guess);

EigenSolution solve_eigenvalue(const Potential& potential, const Contour& contour, cplx E_guess,
                               const IntegratorConfig& icfg = {}, const LMConfig& cfg = {});

/// Seeds from the leading-order WKB energy of level n for the given turning-point angle
/// and retries at +-10% of the seed.
EigenSolution solve_level(const ShootingProblem& problem, const LMConfig& cfg, int n, double gamma);

/// Trajectory divided by sqrt(sum |psi|^2 dp).
std::vector<TrajectoryPoint> normalize_numeric(const EigenSolution& sol);

/// sum conj(psi_m) psi_n dp over a shared grid.
cplx overlap(const std::vector<TrajectoryPoint>& m, const std::vector<TrajectoryPoint>& n);
cplx overlap(const EigenSolution& m, const EigenSolution& n);

struct CrossingEvent {
    cplx x;
    double p1;
    double p2;
    cplx psi1;
    cplx psi2;
    double gap; // |psi1 - psi2| / max amplitude
};

/// Compares two eigenfunctions at the given path intersections.
std::vector<CrossingEvent> crossing_events(const EigenSolution& s1, const EigenSolution& s2,
                                           const std::vector<Intersection>& xs);

/// psi at parameter p by cubic Hermite interpolation on the recorded trajectory.
cplx interpolate_psi(const EigenSolution& sol, double p);

void to_json(nlohmann::json& j, const EigenSolution& s);

} // namespace ptspec
