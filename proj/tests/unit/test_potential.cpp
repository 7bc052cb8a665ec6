#include "ptspec/errors.hpp"
#include "ptspec/potential.hpp"
#include "ptspec/detail/ddouble.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ptspec;

namespace {

constexpr double pi = std::numbers::pi;

// |x|^N exp(i N arg(ix)) with arg(ix) = arg(x) + pi/2 folded into (-pi, pi].
cplx polar_oracle(double N, cplx x)
{
    double a = std::atan2(x.imag(), x.real()) + pi / 2.0;
    if (a > pi)
        a -= 2.0 * pi;
    return std::polar(std::pow(std::abs(x), N), N * a);
}

} // namespace

TEST_SUITE("potential")
{
    TEST_CASE("integer exponents match hand-expanded powers")
    {
        const cplx x{0.7, -1.3};
        CHECK(std::abs(Potential(2.0).ix_pow(x) - (-x * x)) < 1e-14);
        CHECK(std::abs(Potential(3.0).ix_pow(x) - (-cplx{0, 1} * x * x * x)) < 1e-14);
        CHECK(std::abs(Potential(4.0).ix_pow(x) - x * x * x * x) < 1e-13);
        CHECK(Potential(4.0).integer_exponent());
        CHECK_FALSE(Potential(2.9).integer_exponent());
    }

    TEST_CASE("principal branch against polar form")
    {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (double N : {0.5, 1.3, 2.9, 5.5}) {
            const Potential V(N);
            for (int i = 0; i < 200; ++i) {
                cplx x{u(rng), u(rng)};
                if (std::abs(x.real()) < 1e-3)
                    continue;
                const cplx want = polar_oracle(N, x);
                CHECK(std::abs(V.ix_pow(x) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
            }
        }
    }

    TEST_CASE("the cut is the positive imaginary axis")
    {
        CHECK(on_cut({0.0, 2.0}));
        CHECK_FALSE(on_cut({0.0, -2.0}));
        CHECK_FALSE(on_cut({1e-3, 2.0}));
        CHECK_THROWS_AS(Potential(2.5).ix_pow({0.0, 1.5}), CutViolation);
        CHECK_NOTHROW(Potential(2.0).ix_pow({0.0, 1.5}));
        CHECK_NOTHROW(Potential(2.5).ix_pow({0.0, -1.5}));
    }

    TEST_CASE("PT symmetry: V(-conj x) = conj V(x) off the cut")
    {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (double N : {1.5, 3.0, 4.7}) {
            const Potential V(N);
            for (int i = 0; i < 100; ++i) {
                const cplx x{u(rng), u(rng)};
                if (std::abs(x.real()) < 1e-3)
                    continue;
                const cplx a = V.value(-std::conj(x));
                const cplx b = std::conj(V.value(x));
                CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
            }
        }
    }

    TEST_CASE("continuation onto the next sheet picks up exp(2 pi i N)")
    {
        const double N = 2.9;
        const Potential V(N);
        const cplx x{0.4, -0.9};
        const double a = std::arg(cplx{0, 1} * x);
        const cplx next = V.ix_pow_continued(x, a + 2.0 * pi);
        CHECK(std::abs(next - V.ix_pow(x) * std::polar(1.0, 2.0 * pi * N)) < 1e-12);
        CHECK(std::abs(V.ix_pow_continued(x, a) - V.ix_pow(x)) < 1e-13);
    }

    TEST_CASE("int_pow agrees with repeated multiplication")
    {
        const cplx z{1.1, -0.4};
        cplx acc = 1.0;
        for (int n = 0; n < 12; ++n) {
            CHECK(std::abs(int_pow(z, n) - acc) <= 1e-13 * std::abs(acc));
            acc *= z;
        }
    }

    TEST_CASE("double-double keeps the bits a double drops")
    {
        using detail::dd;
        const dd one(1.0);
        const dd tiny(1e-20);
        const dd s = (one + tiny) - one;
        CHECK(static_cast<double>(s) == doctest::Approx(1e-20).epsilon(1e-12));
        // (1 + 2^-60)^2 - 1 = 2^-59 + 2^-120
        const dd a = one + dd(std::ldexp(1.0, -60));
        CHECK(static_cast<double>(a * a - one) == doctest::Approx(std::ldexp(1.0, -59)).epsilon(1e-15));
    }
}
