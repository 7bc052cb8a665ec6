#include "ptspec/errors.hpp"
#include "ptspec/sweep.hpp"
#include "ptspec/wkb.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace ptspec;

TEST_SUITE("sweep")
{
    TEST_CASE("config validation and grid")
    {
        SweepConfig cfg;
        cfg.n_start = 3.0;
        cfg.n_stop = 3.1;
        cfg.n_step = 0.05;
        CHECK(cfg.grid().size() == 3);
        cfg.n_step = -0.1;
        CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
        cfg.n_step = 0.05;
        cfg.level_min = 3;
        cfg.level_max = 1;
        CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    }

    TEST_CASE("family gamma comes from the catalog")
    {
        CHECK(family_gamma(5.0, 1) == doctest::Approx(-3.0 * std::numbers::pi / 10.0));
        CHECK(family_gamma(5.0, 2) == doctest::Approx(std::numbers::pi / 10.0));
    }

    TEST_CASE("sweep values equal direct solves, with or without continuation")
    {
        SweepConfig cfg;
        cfg.n_start = 3.0;
        cfg.n_stop = 3.2;
        cfg.n_step = 0.1;
        cfg.level_max = 1;
        cfg.threads = 2;
        const SweepResult a = run_sweep(cfg);
        cfg.continuation = false;
        const SweepResult b = run_sweep(cfg);
        REQUIRE(a.records.size() == 6);
        REQUIRE(b.records.size() == 6);
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].converged);
            CHECK(std::abs(a.records[i].E - b.records[i].E) < 1e-10);
            if (i > 0 && a.records[i].level == a.records[i - 1].level)
                CHECK(a.records[i].N > a.records[i - 1].N);
        }
        CHECK(a.records[0].E.real() == doctest::Approx(1.156267071988113).epsilon(1e-12));
        CHECK(a.degeneracies.empty());

        std::ostringstream csv;
        write_sweep_csv(csv, a);
        CHECK(csv.str().rfind("N,level,family,E_re,E_im,residue,converged", 0) == 0);
        CHECK(sweep_to_json(a).at("records").size() == 6);
    }

    TEST_CASE("journal resume skips finished points")
    {
        const auto path = std::filesystem::temp_directory_path() / "ptspec_journal_test.txt";
        std::filesystem::remove(path);
        SweepConfig cfg;
        cfg.n_start = 4.0;
        cfg.n_stop = 4.1;
        cfg.n_step = 0.1;
        cfg.level_max = 1;
        cfg.output_path = path.string();
        const SweepResult first = run_sweep(cfg);
        CHECK(read_journal(path.string()).size() == 4);
        const SweepResult again = run_sweep(cfg);
        CHECK(read_journal(path.string()).size() == 4);
        REQUIRE(again.records.size() == first.records.size());
        for (std::size_t i = 0; i < first.records.size(); ++i)
            CHECK(std::abs(again.records[i].E - first.records[i].E) < 1e-12);
        std::filesystem::remove(path);
    }

    TEST_CASE("even-N family coincidence")
    {
        SweepConfig c1, c2;
        c2.family = 2;
        for (int n = 0; n <= 4; ++n) {
            const auto a = solve_point(c1, 4.0, n, wkb_energy(4.0, family_gamma(4.0, 1), n));
            const auto b = solve_point(c2, 4.0, n, wkb_energy(4.0, family_gamma(4.0, 2), n));
            CHECK(std::abs(a.E - b.E) <= 1e-9);
        }
    }

    TEST_CASE("probe near N = 3 stays real")
    {
        const ProbeReport r = near_integer_probe(1, 3, 0, 2);
        CHECK(r.entries.size() == 9);
        for (const auto& e : r.entries) {
            CHECK(e.converged);
            CHECK(e.real);
        }
        CHECK(probe_to_json(r).at("entries").size() == 9);
    }

    TEST_CASE("no merger inside the unbroken region")
    {
        SweepConfig cfg;
        cfg.n_start = 2.2;
        cfg.n_stop = 2.6;
        cfg.n_step = 0.1;
        CHECK_THROWS_AS(locate_degeneracy(cfg, 0), NoDegeneracyInRange);
    }
}
