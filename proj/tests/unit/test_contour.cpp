#include "ptspec/contour.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/paths.hpp"
#include "ptspec/wedges.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace ptspec;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<Contour> zoo()
{
    const StokesAngles th = stokes_angles(3.0, 1);
    const cplx A = boundary_point(4.0, th.left), B = boundary_point(4.0, th.right);
    return {
        Contour::hyperbolic(0.2, th.right, 4.0 * std::cos(th.right)),
        Contour::hyperbolic(0.5, pi / 5.0, 3.0, true),
        Contour::hyperbolic(0.5, pi / 5.0, 3.0, false),
        Contour::rational_sqrt(0.1, 8.0, 0.4, 5.0),
        Contour::sinusoidal(A, B, 0.7, 5.0),
        Contour::knot(A, B, 0.1, 1.0),
        Contour::line(A, B),
        Contour::real_axis(4.0),
        Contour::polyline_v(4.0, th.right),
        Contour::polynomial(A, B, {0.0, 0.08, -0.03, 0.015}),
        Contour::cross_cut(A, B, 1.5),
    };
}

} // namespace

TEST_SUITE("contour")
{
    TEST_CASE("endpoints land on the requested anchors")
    {
        for (const Contour& c : zoo()) {
            CHECK(std::abs(c.endpoint_a() - c.anchor_a()) < 1e-12);
            CHECK(std::abs(c.endpoint_b() - c.anchor_b()) < 1e-12);
        }
    }

    TEST_CASE("tangent matches a central difference of the point map")
    {
        for (const Contour& c : zoo()) {
            const auto bp = c.breakpoints();
            for (int i = 1; i < 20; ++i) {
                const double p = c.p_min() + (c.p_max() - c.p_min()) * i / 20.0;
                bool near_break = false;
                for (double b : bp)
                    near_break = near_break || std::abs(p - b) < 1e-3;
                if (near_break)
                    continue;
                const double h = 1e-6 * std::max(1.0, c.p_max() - c.p_min());
                const cplx fd = (c.point(p + h) - c.point(p - h)) / (2.0 * h);
                CHECK(std::abs(c.tangent(p) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
            }
        }
    }

    TEST_CASE("hyperbolic branches approach their asymptote angle")
    {
        const double th = -0.6;
        const Contour below = Contour::hyperbolic(0.3, th, 400.0);
        CHECK(std::arg(below.endpoint_b()) == doctest::Approx(th).epsilon(1e-5));
        CHECK(below.point(0.0).imag() == doctest::Approx(-0.3));

        const Contour over = Contour::hyperbolic(0.3, 0.6, 400.0, true);
        CHECK(std::arg(over.endpoint_b()) == doctest::Approx(0.6).epsilon(1e-5));
        CHECK(over.point(0.0).imag() == doctest::Approx(0.3));
        CHECK(over.cut_crossing());

        const Contour under = Contour::hyperbolic(0.3, 0.6, 400.0, false);
        CHECK(std::arg(under.endpoint_b()) == doctest::Approx(0.6).epsilon(1e-5));
        CHECK(under.point(0.0).imag() == doctest::Approx(-0.3));
        CHECK_FALSE(under.cut_crossing());
        CHECK(distance_to_cut(under) > 0.1);
    }

    TEST_CASE("bad parameters throw")
    {
        CHECK_THROWS_AS(Contour::hyperbolic(-1.0, -0.5, 3.0), DomainError);
        CHECK_THROWS_AS(Contour::hyperbolic(0.2, 0.0, 3.0), DomainError);
        CHECK_THROWS_AS(Contour::hyperbolic(0.2, -0.5, 3.0, true), DomainError);
        CHECK_THROWS_AS(Contour::rational_sqrt(0.1, -1.0, 0.4, 3.0), DomainError);
        CHECK_THROWS_AS(Contour::cross_cut({-1, 0}, {1, 0}, -1.0), DomainError);
    }

    TEST_CASE("a 5-period sinusoid crosses its chord 9 times")
    {
        // sin(2 pi 5 s) has 11 zeros on [0, 1]; the two ends are shared endpoints
        const Contour s = Contour::sinusoidal({-4.0, 0.0}, {4.0, 0.0}, 1.0, 5.0);
        const auto xs = intersections(Contour::real_axis(4.0), s);
        CHECK(xs.size() == 9);
        for (const auto& x : xs) {
            CHECK(std::abs(x.x.imag()) < 1e-10);
            const double k = (x.x.real() + 4.0) / 0.8;
            CHECK(std::abs(k - std::round(k)) < 1e-8);
        }
    }

    TEST_CASE("two straight chords meet where the algebra says")
    {
        const Contour a = Contour::line({-2.0, -1.0}, {2.0, 1.0});
        const Contour b = Contour::line({-2.0, 1.0}, {2.0, -1.0});
        const auto xs = intersections(a, b);
        REQUIRE(xs.size() == 1);
        CHECK(std::abs(xs[0].x) < 1e-10);
    }

    TEST_CASE("paths running along each other are reported as overlap")
    {
        CHECK_THROWS_AS(intersections(Contour::real_axis(3.0), Contour::line({-3.0, 0.0}, {3.0, 0.0})),
                        DegenerateOverlap);
    }

    TEST_CASE("the knot crosses itself once")
    {
        const Contour k = Contour::knot({-4.0, 0.0}, {4.0, 0.0}, 0.0, 1.0);
        const auto xs = self_intersections(k);
        REQUIRE(xs.size() == 1);
        // p - 2 sin p = 0 at p = +-1.895494267...
        CHECK(std::abs(xs[0].p1 + xs[0].p2) < 1e-8);
        CHECK(std::abs(xs[0].p2) == doctest::Approx(1.895494267033981).epsilon(1e-8));
    }

    TEST_CASE("reversal swaps the ends and flips the tangent")
    {
        for (const Contour& c : zoo()) {
            const Contour r = c.reversed();
            CHECK(std::abs(r.endpoint_a() - c.endpoint_b()) < 1e-12);
            const double p = 0.3 * c.p_min() + 0.7 * c.p_max();
            const double q = c.p_min() + c.p_max() - p;
            CHECK(std::abs(r.tangent(q) + c.tangent(p)) < 1e-12);
        }
    }

    TEST_CASE("JSON round trip reproduces the path")
    {
        for (const Contour& c : zoo()) {
            const Contour back = contour_from_json(contour_to_json(c));
            CHECK(back.kind() == c.kind());
            for (int i = 0; i <= 10; ++i) {
                const double p = c.p_min() + (c.p_max() - c.p_min()) * i / 10.0;
                CHECK(std::abs(back.point(p) - c.point(p)) < 1e-10);
            }
        }
        CHECK_THROWS_AS(contour_from_json(nlohmann::json{{"kind", "spiral"}}), InvalidConfig);
    }

    TEST_CASE("kind names round trip")
    {
        for (const Contour& c : zoo())
            CHECK(contour_kind_from_string(to_string(c.kind())) == c.kind());
        CHECK_THROWS(contour_kind_from_string("nope"));
    }
}

TEST_SUITE("paths")
{
    TEST_CASE("family-1 default policy follows N")
    {
        CHECK(select_default_contour(1.5, 1, 6.0).kind() == ContourKind::rational_sqrt);
        CHECK(select_default_contour(2.5, 1, 6.0).kind() == ContourKind::real_axis);
        CHECK(select_default_contour(3.0, 1, 4.0).kind() == ContourKind::hyperbolic);
        const auto& h = std::get<HyperbolicParams>(select_default_contour(3.0, 1, 4.0).params());
        CHECK(h.a == doctest::Approx(0.2));
    }

    TEST_CASE("higher families follow their Stokes angles")
    {
        // N = 5, k = 2 has theta_right = pi/14
        const Contour g = select_default_contour(5.0, 2, 4.0);
        CHECK(g.kind() == ContourKind::hyperbolic);
        CHECK(std::get<HyperbolicParams>(g.params()).theta == doctest::Approx(pi / 14.0));
        const Contour up = select_default_contour(6.0, 3, 60.0);
        CHECK(up.cut_crossing());
        CHECK(std::arg(up.endpoint_b()) == doctest::Approx(stokes_angles(6.0, 3).right).epsilon(1e-2));
        const Contour under = select_default_contour(6.5, 3, 60.0);
        CHECK_FALSE(under.cut_crossing());
        CHECK(distance_to_cut(under) > 0.0);
        CHECK_THROWS_AS(select_default_contour(3.0, 5, 4.0), DomainError);
    }

    TEST_CASE("suggested r0 grows with the decay target and clears r_min")
    {
        const double a = suggested_r0(3.0, 1.0, -0.3, 10.0, 0.0);
        const double b = suggested_r0(3.0, 1.0, -0.3, 30.0, 0.0);
        CHECK(b > a);
        CHECK(suggested_r0(3.0, 1.0, -0.3, 10.0, 9.0) >= 9.0);
        CHECK(suggested_r0(3.0, 50.0, -0.3, 10.0, 0.0) > a);
    }

    TEST_CASE("six-path geometry puts A B C D on the Stokes lines")
    {
        const auto ps = six_paths(3.0);
        REQUIRE(ps.size() == 6);
        const StokesAngles th = stokes_angles(3.0, 1);
        CHECK(std::abs(ps[0].contour.endpoint_b() - std::polar(4.0, th.right)) < 1e-12);
        CHECK(std::abs(ps[1].contour.endpoint_a() - std::polar(6.0, th.left)) < 1e-12);
        CHECK(std::abs(ps[3].contour.endpoint_b() - cplx{6.0, 0.0}) < 1e-12);
        CHECK(ps[5].contour.cut_crossing());
    }

    TEST_CASE("named contours")
    {
        CHECK(named_contour("real", 2.0, 4.0).kind() == ContourKind::real_axis);
        CHECK(named_contour("sin-cd", 3.0, 6.0).kind() == ContourKind::sinusoidal);
        CHECK_THROWS_AS(named_contour("spiral", 3.0, 4.0), InvalidConfig);
        CHECK(harmonic_paths(4.0).size() == 4);
    }
}
