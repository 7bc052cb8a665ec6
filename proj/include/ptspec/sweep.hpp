#pragma once

#include "ptspec/contour.hpp"
#include "ptspec/eigensolver.hpp"
#include "ptspec/integrator.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace ptspec {

struct SweepConfig {
    double n_start = 2.0;
    double n_stop = 4.0;
    double n_step = 0.01;
    int level_min = 0;
    int level_max = 3;
    int family = 1;
    bool continuation = true;
    /// March from n_stop down to n_start instead of upwards.
    bool descending = false;
    /// Append-only journal of finished points; empty disables it. Existing
    /// entries are loaded and skipped, so an interrupted sweep resumes.
    std::string output_path;
    /// Endpoint radius; 0 picks one per point from the asymptotic decay.
    double r0 = 0.0;
    double decay_target = 20.0;
    int threads = 0; // 0 = hardware concurrency
    IntegratorConfig integrator;
    LMConfig lm;

    void validate() const;
    std::vector<double> grid() const;
};

struct SweepRecord {
    double N = 0.0;
    int level = 0;
    int family = 1;
    cplx E;
    double residue = 0.0;
    bool converged = false;
    ContourKind contour_kind = ContourKind::real_axis;
    double r0 = 0.0;
};

struct Degeneracy {
    int level_low = 0; // merges with level_low + 1
    double N_star = 0.0;
    double E_star = 0.0;
    double bracket_width = 0.0;
};

struct SweepResult {
    std::vector<SweepRecord> records; // sorted by (level, N)
    std::vector<Degeneracy> degeneracies;
};

/// WKB turning-point angle of family k.
double family_gamma(double N, int k);

/// Solves one level at one N with the default contour of the family.
EigenSolution solve_point(const SweepConfig& cfg, double N, int level, cplx E_guess);

SweepResult run_sweep(const SweepConfig& cfg);

/// Marches from the upper end of the grid down in N until levels level_low and
/// level_low + 1 stop being distinct and real, then bisects that step to a
/// bracket no wider than `width` in N. Throws NoDegeneracyInRange.
Degeneracy locate_degeneracy(const SweepConfig& cfg, int level_low, double width = 1e-4);

struct ProbeEntry {
    double N = 0.0;
    int level = 0;
    bool converged = false;
    bool real = false;
    cplx E;
};

struct ProbeReport {
    int family = 1;
    int N_int = 0;
    double delta = 0.0;
    std::vector<ProbeEntry> entries;
};

/// Solves at N_int and N_int +- delta for levels [level_min, level_max].
ProbeReport near_integer_probe(int k, int N_int, int level_min, int level_max, double delta = 1e-3);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
nlohmann::json sweep_to_json(const SweepResult& r);
nlohmann::json probe_to_json(const ProbeReport& r);

/// Journal lines: N level family E_re E_im residue converged contour r0.
std::vector<SweepRecord> read_journal(const std::string& path);

} // namespace ptspec
