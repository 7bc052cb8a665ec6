#include "ptspec/errors.hpp"
#include "ptspec/wedges.hpp"
#include "ptspec/wkb.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ptspec;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("wkb")
{
    TEST_CASE("WKB is exact for the oscillator")
    {
        for (int n = 0; n <= 50; ++n)
            CHECK(std::abs(wkb_energy(2.0, 0.0, n) - (2.0 * n + 1.0)) <= 1e-12 * (2.0 * n + 1.0));
    }

    TEST_CASE("closed form against a direct Gamma evaluation")
    {
        // E_n = [(n + 1/2) sqrt(pi) Gamma(3/2 + 1/N) / (cos g Gamma(1 + 1/N))]^(2N/(N+2))
        const double N = 3.0, g = -pi / 10.0;
        for (int n : {0, 3, 9}) {
            const double base = (n + 0.5) * std::sqrt(pi) * std::tgamma(1.5 + 1.0 / N) /
                                (std::cos(g) * std::tgamma(1.0 + 1.0 / N));
            CHECK(wkb_energy(N, g, n) == doctest::Approx(std::pow(base, 2.0 * N / (N + 2.0))).epsilon(1e-13));
        }
    }

    TEST_CASE("family ratio for N = 5")
    {
        CHECK(family_ratio(5.0, pi / 10.0, -3.0 * pi / 10.0) == doctest::Approx(1.988629015490531).epsilon(1e-13));
        for (int n = 0; n < 5; ++n)
            CHECK(wkb_energy(5.0, -3.0 * pi / 10.0, n) / wkb_energy(5.0, pi / 10.0, n) ==
                  doctest::Approx(1.988629015490531).epsilon(1e-12));
    }

    TEST_CASE("ratios compose")
    {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> ug(-1.2, 1.2), un(1.0, 9.0);
        for (int i = 0; i < 50; ++i) {
            const double N = un(rng), a = ug(rng), b = ug(rng), c = ug(rng);
            CHECK(family_ratio(N, a, b) * family_ratio(N, b, c) ==
                  doctest::Approx(family_ratio(N, a, c)).epsilon(1e-12));
        }
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(wkb_energy(3.0, 2.0, 0), DomainError);
        CHECK_THROWS_AS(wkb_energy(3.0, 0.1, -1), DomainError);
    }

    TEST_CASE("oscillator anti-Stokes line runs along the real axis with action pi/2")
    {
        const StokesDiagram d = trace_stokes_diagram(Potential(2.0), 1.0, Box{}, LineKind::anti_stokes);
        REQUIRE(d.turning_points.size() == 2);
        bool found = false;
        for (const auto* l : d.of_kind(LineKind::anti_stokes)) {
            if (l->end_tp < 0)
                continue;
            found = true;
            for (const cplx& x : l->points)
                CHECK(std::abs(x.imag()) < 1e-6);
            // int_{-1}^{1} sqrt(1 - x^2) dx = pi/2, less the bits cut off at both turning points
            CHECK(std::abs(l->action.back()) == doctest::Approx(pi / 2.0).epsilon(1e-4));
        }
        CHECK(found);
    }

    TEST_CASE("Stokes lines keep Re of the action zero, anti-Stokes lines Im")
    {
        const StokesDiagram d = trace_stokes_diagram(Potential(5.0), 1.0, Box{});
        CHECK_FALSE(d.lines.empty());
        for (const auto& l : d.lines)
            for (const cplx& s : l.action) {
                if (l.kind == LineKind::stokes)
                    CHECK(std::abs(s.real()) < 1e-6);
                else
                    CHECK(std::abs(s.imag()) < 1e-6);
            }
    }

    TEST_CASE("N = 5 green turning points are joined over the origin")
    {
        const StokesDiagram d = trace_stokes_diagram(Potential(5.0), 1.0, Box{}, LineKind::anti_stokes);
        const auto green = wedge_family(5.0, 2, 1.0);
        REQUIRE(green.turning_right);
        bool joined = false;
        for (const auto* l : d.of_kind(LineKind::anti_stokes)) {
            if (l->end_tp < 0)
                continue;
            const cplx a = d.turning_points[l->start_tp], b = d.turning_points[l->end_tp];
            const bool pair = (std::abs(a - *green.turning_right) < 1e-8 && std::abs(b - *green.turning_left) < 1e-8) ||
                              (std::abs(b - *green.turning_right) < 1e-8 && std::abs(a - *green.turning_left) < 1e-8);
            if (pair && crosses_positive_imaginary_axis(*l))
                joined = true;
        }
        CHECK(joined);
    }

    TEST_CASE("diagram JSON layout")
    {
        const auto j = diagram_to_json(trace_stokes_diagram(Potential(3.0), 1.0, Box{}));
        CHECK(j.contains("turning_points"));
        CHECK(j.at("lines").is_array());
        CHECK(j.at("lines").at(0).contains("kind"));
        CHECK_THROWS_AS(trace_stokes_diagram(Potential(3.0), 0.0, Box{}), DomainError);
    }
}
