#include "ptspec/contour.hpp"
#include "ptspec/eigensolver.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/paths.hpp"
#include "ptspec/sweep.hpp"
#include "ptspec/wkb.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ptspec;

namespace {

// Independent check of the box-truncated oscillator: RK4 on psi'' = (x^2 - E) psi
// from psi(-L) = 0, bisecting on the sign of psi(L).
double rk4_end(double E, double L, int n)
{
    const double h = 2.0 * L / n;
    double x = -L, y = 0.0, v = 1.0;
    auto f = [E](double x, double y) { return (x * x - E) * y; };
    for (int i = 0; i < n; ++i) {
        const double k1y = v, k1v = f(x, y);
        const double k2y = v + h / 2 * k1v, k2v = f(x + h / 2, y + h / 2 * k1y);
        const double k3y = v + h / 2 * k2v, k3v = f(x + h / 2, y + h / 2 * k2y);
        const double k4y = v + h * k3v, k4v = f(x + h, y + h * k3y);
        y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        x += h;
    }
    return y;
}

double box_oscillator(int n, double L)
{
    double lo = 2.0 * n + 0.5, hi = 2.0 * n + 1.5;
    const int steps = 40000;
    const double flo = rk4_end(lo, L, steps);
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((rk4_end(mid, L, steps) > 0) == (flo > 0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

EigenSolution solve_on(double N, const Contour& c, double guess)
{
    return solve_eigenvalue(Potential(N), c, cplx{guess, 0.0});
}

} // namespace

TEST_SUITE("eigensolver")
{
    TEST_CASE("harmonic levels at the default half-width")
    {
        const Contour c = Contour::real_axis(kHarmonicHalfWidth);
        for (int n = 0; n <= 6; ++n) {
            const EigenSolution s = solve_on(2.0, c, 2.0 * n + 1.2);
            CHECK(std::abs(s.E.real() - (2.0 * n + 1.0)) <= 5e-9);
            CHECK(std::abs(s.E.imag()) <= 1e-12);
            CHECK(s.residue <= 1e-13);
        }
    }

    TEST_CASE("truncation drift at half-width 4 matches an independent box solver")
    {
        const double want = box_oscillator(0, 4.0);
        const EigenSolution s = solve_on(2.0, Contour::real_axis(4.0), 1.1);
        MESSAGE("box oracle " << want << ", shooting " << s.E.real());
        CHECK(want - 1.0 > 1e-7);
        CHECK(std::abs(s.E.real() - want) < 1e-10);
    }

    TEST_CASE("N = 3 ground state and first excited level")
    {
        SweepConfig cfg;
        const EigenSolution g = solve_point(cfg, 3.0, 0, 1.0);
        CHECK(g.E.real() == doctest::Approx(1.156267071988113).epsilon(1e-12));
        const EigenSolution e = solve_point(cfg, 3.0, 1, 4.0);
        CHECK(e.E.real() == doctest::Approx(4.109228752809652).epsilon(1e-11));
    }

    TEST_CASE("N = 5 on the hyperbolic and real paths")
    {
        const ShootingProblem hyp(Potential(5.0), Contour::hyperbolic(0.2, stokes_angles(5.0, 1).right,
                                                                      4.0 * std::cos(stokes_angles(5.0, 1).right)),
                                  IntegratorConfig{});
        CHECK(solve_level(hyp, LMConfig{}, 0, family_gamma(5.0, 1)).E.real() ==
              doctest::Approx(1.908264578170778).epsilon(1e-9));
        const ShootingProblem real(Potential(5.0), Contour::real_axis(4.0), IntegratorConfig{});
        CHECK(solve_level(real, LMConfig{}, 1, family_gamma(5.0, 2)).E.real() ==
              doctest::Approx(4.363784367712109).epsilon(1e-9));
    }

    TEST_CASE("family-1 spectra are real for N >= 2")
    {
        SweepConfig cfg;
        for (double N : {2.5, 3.0, 4.0, 6.0})
            for (int n = 0; n <= 4; ++n) {
                const EigenSolution s = solve_point(cfg, N, n, wkb_energy(N, family_gamma(N, 1), n));
                CHECK(std::abs(s.E.imag()) <= 1e-12);
            }
    }

    TEST_CASE("accepted LM steps never raise F")
    {
        const ShootingProblem P(Potential(3.0), select_default_contour(3.0, 1, 5.0), IntegratorConfig{});
        cplx E{1.4, 0.2};
        double lambda = 1e-3;
        for (int i = 0; i < 15; ++i) {
            const cplx f = P.endpoint_psi(E);
            const LMStep st = lm_step(P, LMConfig{}, E, lambda, f);
            if (st.accepted)
                CHECK(st.F <= std::norm(f));
            else
                CHECK(st.lambda > lambda);
            E = st.E;
            lambda = st.lambda;
        }
        CHECK(std::abs(E - cplx{1.156267071988113, 0.0}) < 1e-6);
    }

    TEST_CASE("finite-difference Jacobian satisfies Cauchy-Riemann")
    {
        const ShootingProblem P(Potential(3.0), select_default_contour(3.0, 1, 5.0), IntegratorConfig{});
        const Jacobian J = fd_jacobian(P, {1.3, 0.05}, 1e-7);
        const double scale = std::hypot(J.uu_a, J.vv_a);
        CHECK(std::abs(J.uu_a - J.vv_b) < 1e-5 * scale);
        CHECK(std::abs(J.uu_b + J.vv_a) < 1e-5 * scale);
    }

    TEST_CASE("NotConverged carries the best iterate")
    {
        LMConfig cfg;
        cfg.max_iters = 2;
        cfg.extended_iters = 0;
        cfg.step_tol = 0.0;
        const ShootingProblem P(Potential(3.0), select_default_contour(3.0, 1, 5.0), IntegratorConfig{});
        try {
            solve_eigenvalue(P, cfg, cplx{1.6, 0.0});
            FAIL("expected NotConverged");
        } catch (const NotConverged& e) {
            CHECK(e.iterations() <= 2);
            CHECK(std::isfinite(e.best_residue()));
            CHECK(std::abs(e.best_E() - cplx{1.6, 0.0}) < 1.0);
        }
        CHECK_THROWS_AS(solve_eigenvalue(P, LMConfig{}, cplx{NAN, 0.0}), DomainError);
    }

    TEST_CASE("oscillator eigenfunctions: Gaussian shape and Hermite orthogonality")
    {
        const Contour c = Contour::real_axis(kHarmonicHalfWidth);
        const EigenSolution s0 = solve_on(2.0, c, 1.1);
        const EigenSolution s1 = solve_on(2.0, c, 3.1);
        const EigenSolution s2 = solve_on(2.0, c, 5.1);
        const auto n0 = normalize_numeric(s0);
        const auto n2 = normalize_numeric(s2);
        CHECK(std::abs(overlap(n0, n0) - 1.0) < 1e-12);
        CHECK(std::abs(overlap(n0, n2)) < 1e-8);
        CHECK(std::abs(overlap(normalize_numeric(s1), n0)) < 1e-8);

        // psi_0 ~ exp(-x^2/2): ratios against the middle value
        const double mid = 0.5 * (c.p_min() + c.p_max());
        const cplx centre = interpolate_psi(s0, mid);
        for (double x : {-2.0, -0.7, 0.33, 1.5}) {
            const cplx r = interpolate_psi(s0, mid + x) / centre;
            CHECK(std::abs(r - std::exp(-x * x / 2.0)) < 1e-8);
        }
    }

    TEST_CASE("sinusoidal path breaks the conjugated overlap but not the eigenvalue")
    {
        const auto paths = harmonic_paths(kHarmonicHalfWidth);
        const Contour& sin = paths[3].contour;
        const EigenSolution a = solve_on(2.0, sin, 1.1);
        const EigenSolution b = solve_on(2.0, sin, 5.1);
        CHECK(a.E.real() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(overlap(normalize_numeric(a), normalize_numeric(b))) > 0.1);
    }

    TEST_CASE("crossing events: same eigenfunction on both paths")
    {
        const auto paths = harmonic_paths(kHarmonicHalfWidth);
        const EigenSolution r = solve_on(2.0, paths[0].contour, 1.1);
        const EigenSolution s = solve_on(2.0, paths[3].contour, 1.1);
        const auto xs = intersections(paths[0].contour, paths[3].contour);
        const auto ev = crossing_events(r, s, xs);
        REQUIRE(ev.size() == xs.size());
        for (const auto& e : ev)
            CHECK(e.gap <= 1e-8);

        const EigenSolution other = solve_on(2.0, paths[3].contour, 3.1);
        CHECK_THROWS_AS(crossing_events(r, other, xs), DomainError);
    }

    TEST_CASE("random non-cut paths agree at N = 4")
    {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> ua(0.1, 1.0), uamp(0.05, 0.5), uper(1.0, 4.0);
        const StokesAngles th = stokes_angles(4.0, 1);
        const double r0 = 4.0;
        const cplx A = boundary_point(r0, th.left), B = boundary_point(r0, th.right);
        const double ref = solve_on(4.0, Contour::hyperbolic(0.5, th.right, r0 * std::cos(th.right)), 1.5).E.real();
        for (int i = 0; i < 4; ++i) {
            const Contour h = Contour::hyperbolic(ua(rng), th.right, r0 * std::cos(th.right));
            const Contour s = Contour::sinusoidal(A, B, uamp(rng), uper(rng));
            CHECK(std::abs(solve_on(4.0, h, 1.5).E - ref) < 1e-10);
            CHECK(std::abs(solve_on(4.0, s, 1.5).E - ref) < 1e-10);
        }
    }
}
