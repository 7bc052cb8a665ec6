#include "ptspec/eigensolver.hpp"

#include "ptspec/errors.hpp"
#include "ptspec/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ptspec {

namespace {

constexpr double kSingularDet = 1e-300;
constexpr double kLambdaCeiling = 1e30;
constexpr std::size_t kStallWindow = 6;
constexpr double kNearRoot = 1e-8;
constexpr double kStallLambda = 1e8;

// Endpoint value, with overflow mapped to an infinite residual.
cplx safe_psi(const ShootingProblem& problem, cplx E)
{
    try {
        return problem.endpoint_psi(E);
    } catch (const Overflow&) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
}

double newton_distance(cplx f, const Jacobian& J)
{
    const double g = std::hypot(J.uu_a, J.vv_a);
    return g > 0.0 ? std::abs(f) / g : std::numeric_limits<double>::infinity();
}

// delta = -(J^T J + lambda diag(J^T J))^{-1} J^T f
cplx damped_step(const Jacobian& J, cplx f, double lambda, cplx E)
{
    const double u = f.real(), v = f.imag();
    const double a11 = J.uu_a * J.uu_a + J.vv_a * J.vv_a;
    const double a12 = J.uu_a * J.uu_b + J.vv_a * J.vv_b;
    const double a22 = J.uu_b * J.uu_b + J.vv_b * J.vv_b;
    const double g1 = J.uu_a * u + J.vv_a * v;
    const double g2 = J.uu_b * u + J.vv_b * v;
    const double m11 = a11 * (1.0 + lambda);
    const double m22 = a22 * (1.0 + lambda);
    const double det = m11 * m22 - a12 * a12;
    if (!(std::abs(det) > kSingularDet))
        throw SingularNormalEquations("damped normal equations are singular at E = " + std::to_string(E.real()) +
                                      (E.imag() < 0 ? " - " : " + ") + std::to_string(std::abs(E.imag())) + "i");
    return {-(m22 * g1 - a12 * g2) / det, -(m11 * g2 - a12 * g1) / det};
}

std::vector<double> trapezoid_weights(const std::vector<TrajectoryPoint>& t)
{
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        const double dp = t[j + 1].p - t[j].p;
        w[j] += 0.5 * dp;
        w[j + 1] += 0.5 * dp;
    }
    return w;
}

} // namespace

void LMConfig::validate() const
{
    if (!(lambda0 > 0.0))
        throw InvalidConfig("lambda0 must be positive");
    if (!(decrease_factor > 0.0 && decrease_factor < 1.0 && increase_factor > 1.0))
        throw InvalidConfig("LM factors must satisfy 0 < decrease < 1 < increase");
    if (!(fd_rel_step > 0.0))
        throw InvalidConfig("finite-difference step must be positive");
    if (max_iters < 1)
        throw InvalidConfig("max_iters must be at least 1");
    if (!(residue_tol > 0.0) || step_tol < 0.0)
        throw InvalidConfig("tolerances must be positive");
}

Jacobian fd_jacobian(const ShootingProblem& problem, cplx E, double step)
{
    const cplx dA = (problem.endpoint_psi(E + step) - problem.endpoint_psi(E - step)) / (2.0 * step);
    const cplx dB = (problem.endpoint_psi(E + cplx{0.0, step}) - problem.endpoint_psi(E - cplx{0.0, step})) /
                    (2.0 * step);
    return {dA.real(), dB.real(), dA.imag(), dB.imag()};
}

LMStep lm_step(const ShootingProblem& problem, const LMConfig& cfg, cplx E, double lambda, cplx f)
{
    const Jacobian J = fd_jacobian(problem, E, cfg.fd_rel_step * std::max(1.0, std::abs(E)));
    return lm_step(problem, cfg, E, lambda, f, J);
}

LMStep lm_step(const ShootingProblem& problem, const LMConfig& cfg, cplx E, double lambda, cplx f,
               const Jacobian& J)
{
    const cplx delta = damped_step(J, f, lambda, E);
    const double F = std::norm(f);
    const cplx E_try = E + delta;
    const double F_try = std::norm(safe_psi(problem, E_try));
    if (F_try <= F)
        return {E_try, lambda * cfg.decrease_factor, F_try, true, delta};
    return {E, lambda * cfg.increase_factor, F, false, delta};
}

namespace {

cplx as_cplx(cplx E) { return E; }
cplx as_cplx(const detail::cdd& E) { return E.to_complex(); }

template <class Energy>
struct Iterate {
    Energy E;
    cplx f;
    double lambda;
    Jacobian J{};
    bool have_J = false;
};

enum class Stop { residue, stalled, budget };

// Levenberg-Marquardt on f(E) = psi(B); Energy is cplx or a double-double complex.
template <class Energy>
Stop lm_iterate(const ShootingProblem& problem, const LMConfig& cfg, Iterate<Energy>& st, int budget, int& it,
                std::vector<IterationRecord>& trace)
{
    const auto eval = [&](const Energy& E) {
        try {
            return problem.endpoint_psi(E);
        } catch (const Overflow&) {
            const double inf = std::numeric_limits<double>::infinity();
            return cplx{inf, inf};
        }
    };
    bool stale = !st.have_J;
    std::vector<double> history;
    for (int k = 0; k < budget; ++k) {
        if (std::abs(st.f) <= cfg.residue_tol)
            return Stop::residue;
        if (st.lambda > kLambdaCeiling)
            return Stop::stalled;
        // Close to the root and F no longer shrinking: rounding noise dominates.
        history.push_back(std::norm(st.f));
        if (st.have_J && history.size() > kStallWindow &&
            history.back() > 0.25 * history[history.size() - 1 - kStallWindow] &&
            (st.lambda > kStallLambda ||
             newton_distance(st.f, st.J) <= kNearRoot * std::max(1.0, std::abs(as_cplx(st.E)))))
            return Stop::stalled;
        ++it;
        if (stale) {
            const double h = cfg.fd_rel_step * std::max(1.0, std::abs(as_cplx(st.E)));
            const cplx dA = (eval(st.E + Energy(cplx{h, 0.0})) - eval(st.E + Energy(cplx{-h, 0.0}))) / (2.0 * h);
            const cplx dB = (eval(st.E + Energy(cplx{0.0, h})) - eval(st.E + Energy(cplx{0.0, -h}))) / (2.0 * h);
            st.J = {dA.real(), dB.real(), dA.imag(), dB.imag()};
            st.have_J = true;
            stale = false;
        }
        const cplx delta = damped_step(st.J, st.f, st.lambda, as_cplx(st.E));
        const Energy E_try = st.E + Energy(delta);
        const cplx f_try = eval(E_try);
        const bool accepted = std::norm(f_try) <= std::norm(st.f);
        if (accepted) {
            st.E = E_try;
            st.f = f_try;
            st.lambda *= cfg.decrease_factor;
            stale = true;
        } else {
            st.lambda *= cfg.increase_factor;
        }
        trace.push_back({it, as_cplx(st.E), std::norm(st.f), st.lambda, accepted});
    }
    return std::abs(st.f) <= cfg.residue_tol ? Stop::residue : Stop::budget;
}

} // namespace

EigenSolution solve_eigenvalue(const ShootingProblem& problem, const LMConfig& cfg, cplx E_guess)
{
    cfg.validate();
    if (!std::isfinite(E_guess.real()) || !std::isfinite(E_guess.imag()))
        throw DomainError("initial energy guess must be finite");

    EigenSolution sol;
    sol.N = problem.potential().exponent();
    sol.contour = problem.contour();

    Iterate<cplx> st{E_guess, safe_psi(problem, E_guess), cfg.lambda0};
    if (!std::isfinite(std::abs(st.f)))
        throw NotConverged("integration overflowed at the initial guess", E_guess, std::abs(st.f), 0);
    sol.trace.push_back({0, st.E, std::norm(st.f), st.lambda, true});

    int it = 0;
    Stop stop = lm_iterate(problem, cfg, st, cfg.max_iters, it, sol.trace);

    detail::cdd E_ext(st.E);
    cplx f = st.f;
    Jacobian J = st.J;
    bool have_J = st.have_J;
    if (stop != Stop::residue && cfg.extended_precision) {
        // Rounding noise in the double recurrence sets a floor on |psi(B)|; redo the
        // last iterations with the same discrete problem in double-double.
        Iterate<detail::cdd> ext{E_ext, problem.endpoint_psi(E_ext), cfg.lambda0};
        stop = lm_iterate(problem, cfg, ext, cfg.extended_iters, it, sol.trace);
        E_ext = ext.E;
        f = ext.f;
        J = ext.J;
        have_J = ext.have_J;
        sol.extended = true;
    }

    sol.E = E_ext.to_complex();
    sol.residue = std::abs(f);
    sol.iterations = it;
    if (stop == Stop::residue) {
        sol.criterion = Convergence::residue;
    } else if (cfg.step_tol > 0.0 && have_J &&
               newton_distance(f, J) <= cfg.step_tol * std::max(1.0, std::abs(sol.E))) {
        sol.criterion = Convergence::step;
    }
    sol.converged = sol.criterion != Convergence::none;
    if (!sol.converged)
        throw NotConverged("shooting did not reach the residue tolerance after " + std::to_string(it) +
                               " iterations (best residue " + std::to_string(sol.residue) + ")",
                           sol.E, sol.residue, it);

    IntegratorConfig icfg = problem.config();
    icfg.record_trajectory = true;
    const ShootingProblem recorder(problem.potential(), problem.contour(), icfg);
    sol.trajectory = sol.extended ? recorder.propagate(E_ext, default_initial_state()).trajectory
                                  : recorder.propagate(sol.E).trajectory;
    return sol;
}

EigenSolution solve_eigenvalue(const Potential& potential, const Contour& contour, cplx E_guess,
                               const IntegratorConfig& icfg, const LMConfig& cfg)
{
    return solve_eigenvalue(ShootingProblem(potential, contour, icfg), cfg, E_guess);
}

EigenSolution solve_level(const ShootingProblem& problem, const LMConfig& cfg, int n, double gamma)
{
    if (n < 0)
        throw DomainError("level index must be non-negative");
    const double seed = wkb_energy(problem.potential().exponent(), gamma, n);
    std::optional<NotConverged> last;
    for (double factor : {1.0, 1.1, 0.9}) {
        try {
            EigenSolution s = solve_eigenvalue(problem, cfg, cplx{seed * factor, 0.0});
            s.level = n;
            return s;
        } catch (const NotConverged& e) {
            last = e;
        }
    }
    throw NotConverged("level " + std::to_string(n) + " did not converge from the WKB seed or its +-10% retries",
                       last->best_E(), last->best_residue(), last->iterations());
}

std::vector<TrajectoryPoint> normalize_numeric(const EigenSolution& sol)
{
    const auto w = trapezoid_weights(sol.trajectory);
    double sum = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j)
        sum += std::norm(sol.trajectory[j].psi) * w[j];
    if (!(sum >= 1e-200))
        throw ZeroNorm("eigenfunction norm vanishes; was the trajectory recorded?");
    const double s = 1.0 / std::sqrt(sum);
    std::vector<TrajectoryPoint> out = sol.trajectory;
    for (auto& t : out) {
        t.psi *= s;
        t.dpsi *= s;
    }
    return out;
}

cplx overlap(const std::vector<TrajectoryPoint>& m, const std::vector<TrajectoryPoint>& n)
{
    if (m.size() != n.size() || m.empty())
        throw GridMismatch("overlap needs trajectories on the same grid");
    for (std::size_t j = 0; j < m.size(); ++j)
        if (std::abs(m[j].p - n[j].p) > 1e-12 || std::abs(m[j].x - n[j].x) > 1e-12)
            throw GridMismatch("overlap needs trajectories on the same grid");
    const auto w = trapezoid_weights(m);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j)
        acc += std::conj(m[j].psi) * n[j].psi * w[j];
    return acc;
}

cplx overlap(const EigenSolution& m, const EigenSolution& n) { return overlap(m.trajectory, n.trajectory); }

cplx interpolate_psi(const EigenSolution& sol, double p)
{
    const auto& t = sol.trajectory;
    if (t.size() < 2 || !sol.contour)
        throw DomainError("interpolation needs a recorded trajectory and its contour");
    if (p < t.front().p - 1e-12 || p > t.back().p + 1e-12)
        throw DomainError("interpolation point outside the trajectory");
    auto it = std::upper_bound(t.begin(), t.end(), p, [](double v, const TrajectoryPoint& q) { return v < q.p; });
    std::size_t j = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    j = std::min(j, t.size() - 2);
    const auto& a = t[j];
    const auto& b = t[j + 1];
    const double h = b.p - a.p;
    const double s = (p - a.p) / h;
    // dpsi/dp = x'(p) dpsi/dx
    const cplx ma = sol.contour->tangent(a.p) * a.dpsi * h;
    const cplx mb = sol.contour->tangent(b.p) * b.dpsi * h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a.psi + (s3 - 2 * s2 + s) * ma + (-2 * s3 + 3 * s2) * b.psi + (s3 - s2) * mb;
}

std::vector<CrossingEvent> crossing_events(const EigenSolution& s1, const EigenSolution& s2,
                                           const std::vector<Intersection>& xs)
{
    if (!s1.contour || !s2.contour)
        throw DomainError("crossing events need solutions with contours");
    const auto& c1 = *s1.contour;
    const auto& c2 = *s2.contour;
    if (std::abs(c1.endpoint_a() - c2.endpoint_a()) > 1e-10 || std::abs(c1.endpoint_b() - c2.endpoint_b()) > 1e-10)
        throw EndpointMismatch("the two paths do not share both boundary points");
    if (std::abs(s1.E - s2.E) > 1e-10 * std::max(1.0, std::abs(s1.E)))
        throw DomainError("crossing events compare one eigenvalue; the two energies differ");

    double amp = 0.0;
    for (const auto& t : s1.trajectory)
        amp = std::max(amp, std::abs(t.psi));
    for (const auto& t : s2.trajectory)
        amp = std::max(amp, std::abs(t.psi));
    if (amp == 0.0)
        throw ZeroNorm("eigenfunctions vanish identically");

    std::vector<CrossingEvent> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
        const cplx a = interpolate_psi(s1, x.p1);
        const cplx b = interpolate_psi(s2, x.p2);
        out.push_back({x.x, x.p1, x.p2, a, b, std::abs(a - b) / amp});
    }
    return out;
}

void to_json(nlohmann::json& j, const EigenSolution& s)
{
    j = nlohmann::json{{"N", s.N},
                       {"family", s.family},
                       {"level", s.level},
                       {"E_re", s.E.real()},
                       {"E_im", s.E.imag()},
                       {"residue", s.residue},
                       {"iterations", s.iterations},
                       {"converged", s.converged}};
    if (s.contour)
        j["contour"] = contour_to_json(*s.contour, 0);
}

} // namespace ptspec
