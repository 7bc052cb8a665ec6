#include "ptspec/sweep.hpp"

#include "ptspec/errors.hpp"
#include "ptspec/paths.hpp"
#include "ptspec/wedges.hpp"
#include "ptspec/wkb.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace ptspec {

namespace {

constexpr double kMergeGap = 1e-2;
constexpr double kRealTol = 1e-6;

long long grid_key(double N) { return std::llround(N * 1e9); }

bool is_real(cplx E) { return std::abs(E.imag()) <= kRealTol * std::max(1.0, std::abs(E.real())); }

cplx wkb_seed(double N, int k, int level)
{
    try {
        return wkb_energy(N, family_gamma(N, k), level);
    } catch (const DomainError&) {
        return 2.0 * level + 1.0;
    }
}

SweepRecord make_record(double N, int level, int family)
{
    SweepRecord r;
    r.N = N;
    r.level = level;
    r.family = family;
    return r;
}

void write_journal_line(std::ostream& os, const SweepRecord& r)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g %d %d %.17g %.17g %.6g %d %s %.17g\n", r.N, r.level, r.family, r.E.real(),
                  r.E.imag(), r.residue, r.converged ? 1 : 0, std::string(to_string(r.contour_kind)).c_str(), r.r0);
    os << buf;
}

struct PairState {
    double N;
    cplx lo, hi;
};

// Both levels converged, real and apart.
std::optional<PairState> solve_pair(const SweepConfig& cfg, double N, int level_low, cplx seed_lo, cplx seed_hi)
{
    try {
        const EigenSolution a = solve_point(cfg, N, level_low, seed_lo);
        const EigenSolution b = solve_point(cfg, N, level_low + 1, seed_hi);
        if (!is_real(a.E) || !is_real(b.E) || std::abs(a.E - b.E) < kMergeGap)
            return std::nullopt;
        return PairState{N, a.E, b.E};
    } catch (const NotConverged&) {
        return std::nullopt;
    } catch (const Overflow&) {
        return std::nullopt;
    } catch (const SingularNormalEquations&) {
        return std::nullopt;
    }
}

} // namespace

void SweepConfig::validate() const
{
    if (!(n_start < n_stop))
        throw InvalidConfig("sweep needs n_start < n_stop");
    if (!(n_step > 0.0))
        throw InvalidConfig("sweep needs n_step > 0");
    if (!(n_start > 0.0))
        throw InvalidConfig("sweep needs N > 0");
    if (level_min < 0 || level_max < level_min)
        throw InvalidConfig("sweep needs 0 <= level_min <= level_max");
    if (family < 1)
        throw InvalidConfig("family index starts at 1");
    if (r0 < 0.0)
        throw InvalidConfig("r0 must be positive (or 0 for automatic)");
    integrator.validate();
    lm.validate();
}

std::vector<double> SweepConfig::grid() const
{
    std::vector<double> g;
    const int n = static_cast<int>(std::floor((n_stop - n_start) / n_step + 1e-9));
    for (int i = 0; i <= n; ++i)
        g.push_back(n_start + i * n_step);
    if (n_stop - g.back() > 1e-9 * n_step)
        g.push_back(n_stop);
    if (descending)
        std::reverse(g.begin(), g.end());
    return g;
}

double family_gamma(double N, int k)
{
    const WedgeFamily f = wedge_family(N, k);
    if (f.gamma)
        return *f.gamma;
    return ((2.0 - N) / (2.0 * N) + 2.0 * (k - 1) / N) * std::numbers::pi;
}

EigenSolution solve_point(const SweepConfig& cfg, double N, int level, cplx E_guess)
{
    const double r0 = cfg.r0 > 0.0 ? cfg.r0
                                   : suggested_r0(N, 1.2 * std::abs(E_guess) + 1.0,
                                                  default_contour_angle(N, cfg.family), cfg.decay_target, 0.0);
    // vertex deeper for higher levels, roughly with the turning points
    const double vertex = std::max(0.2, 0.6 * std::pow(std::max(std::abs(E_guess), 1e-3), 1.0 / N));
    const Contour contour = select_default_contour(N, cfg.family, r0, vertex);
    const ShootingProblem problem(Potential(N), contour, cfg.integrator);
    EigenSolution sol = solve_eigenvalue(problem, cfg.lm, E_guess);
    sol.family = cfg.family;
    sol.level = level;
    return sol;
}

std::vector<SweepRecord> read_journal(const std::string& path)
{
    std::vector<SweepRecord> out;
    std::ifstream in(path);
    if (!in)
        return out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        SweepRecord r;
        double re = 0, im = 0;
        int conv = 0;
        std::string kind;
        if (!(ss >> r.N >> r.level >> r.family >> re >> im >> r.residue >> conv >> kind >> r.r0))
            continue; // torn last line of an interrupted run
        r.E = {re, im};
        r.converged = conv != 0;
        r.contour_kind = contour_kind_from_string(kind);
        out.push_back(r);
    }
    return out;
}

SweepResult run_sweep(const SweepConfig& cfg)
{
    cfg.validate();
    const std::vector<double> grid = cfg.grid();

    std::map<std::pair<int, long long>, SweepRecord> done;
    if (!cfg.output_path.empty())
        for (const auto& r : read_journal(cfg.output_path))
            if (r.family == cfg.family)
                done[{r.level, grid_key(r.N)}] = r;

    std::ofstream journal;
    if (!cfg.output_path.empty()) {
        journal.open(cfg.output_path, std::ios::app);
        if (!journal)
            throw InvalidConfig("cannot open journal " + cfg.output_path);
    }

    SweepResult result;
    std::mutex mu;
    std::atomic<int> next_level{cfg.level_min};

    const auto work = [&] {
        for (int level = next_level++; level <= cfg.level_max; level = next_level++) {
            std::optional<cplx> prev;
            for (double N : grid) {
                SweepRecord rec = make_record(N, level, cfg.family);
                const auto it = done.find({level, grid_key(N)});
                if (it != done.end()) {
                    rec = it->second;
                } else {
                    const cplx seed = cfg.continuation && prev ? *prev : wkb_seed(N, cfg.family, level);
                    try {
                        const EigenSolution sol = solve_point(cfg, N, level, seed);
                        rec.E = sol.E;
                        rec.residue = sol.residue;
                        rec.converged = true;
                        rec.contour_kind = sol.contour->kind();
                        rec.r0 = std::abs(sol.contour->endpoint_b());
                    } catch (const NotConverged& e) {
                        rec.E = e.best_E();
                        rec.residue = e.best_residue();
                    } catch (const Error&) {
                        rec.E = {std::nan(""), std::nan("")};
                        rec.residue = std::nan("");
                    }
                }
                if (rec.converged)
                    prev = rec.E;
                else
                    prev.reset();

                const std::lock_guard<std::mutex> lock(mu);
                result.records.push_back(rec);
                if (journal.is_open() && it == done.end()) {
                    write_journal_line(journal, rec);
                    journal.flush();
                }
            }
        }
    };

    const int levels = cfg.level_max - cfg.level_min + 1;
    int nthreads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::clamp(nthreads, 1, levels);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();

    std::sort(result.records.begin(), result.records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return a.level != b.level ? a.level < b.level : a.N < b.N;
    });

    // Adjacent levels that stop being distinct and real between two grid points.
    std::map<std::pair<int, long long>, const SweepRecord*> at;
    for (const auto& r : result.records)
        at[{r.level, grid_key(r.N)}] = &r;
    const auto ok = [&](int level, double N) {
        const SweepRecord* a = at[{level, grid_key(N)}];
        const SweepRecord* b = at[{level + 1, grid_key(N)}];
        return a && b && a->converged && b->converged && is_real(a->E) && is_real(b->E) &&
               std::abs(a->E - b->E) >= kMergeGap;
    };
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    for (int level = cfg.level_min; level < cfg.level_max; ++level) {
        for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
            const bool lo = ok(level, sorted[j]), hi = ok(level, sorted[j + 1]);
            if (lo == hi)
                continue;
            const double good = lo ? sorted[j] : sorted[j + 1];
            const SweepRecord* a = at[{level, grid_key(good)}];
            const SweepRecord* b = at[{level + 1, grid_key(good)}];
            result.degeneracies.push_back({level, 0.5 * (sorted[j] + sorted[j + 1]),
                                           0.5 * (a->E.real() + b->E.real()), sorted[j + 1] - sorted[j]});
        }
    }
    return result;
}

Degeneracy locate_degeneracy(const SweepConfig& base, int level_low, double width)
{
    SweepConfig cfg = base;
    cfg.descending = true;
    cfg.validate();
    if (!(width > 0.0))
        throw InvalidConfig("bracket width must be positive");

    const std::vector<double> grid = cfg.grid();
    std::optional<PairState> good =
        solve_pair(cfg, grid.front(), level_low, wkb_seed(grid.front(), cfg.family, level_low),
                   wkb_seed(grid.front(), cfg.family, level_low + 1));
    if (!good)
        throw NoDegeneracyInRange("levels " + std::to_string(level_low) + " and " + std::to_string(level_low + 1) +
                                  " are not distinct and real at N = " + std::to_string(grid.front()));

    // March down with linearly extrapolated seeds. A failed step is retried at half
    // the size, so a seed that lands on the wrong level cannot fake a merge.
    std::optional<PairState> prev;
    double step = cfg.n_step;
    while (true) {
        const double N = good->N - step;
        if (N < cfg.n_start - 1e-12)
            throw NoDegeneracyInRange("levels " + std::to_string(level_low) + " and " +
                                      std::to_string(level_low + 1) + " stay distinct over the grid");
        std::optional<PairState> next;
        if (prev) {
            const double t = (N - good->N) / (good->N - prev->N);
            next = solve_pair(cfg, N, level_low, good->lo + t * (good->lo - prev->lo),
                              good->hi + t * (good->hi - prev->hi));
        }
        if (!next)
            next = solve_pair(cfg, N, level_low, good->lo, good->hi);
        if (next) {
            prev = good;
            good = next;
            continue;
        }
        if (step <= width)
            return {level_low, good->N - 0.5 * step, 0.5 * (good->lo.real() + good->hi.real()), step};
        step *= 0.5;
    }
}

ProbeReport near_integer_probe(int k, int N_int, int level_min, int level_max, double delta)
{
    if (N_int < 1)
        throw DomainError("probe needs a positive integer N");
    if (level_min < 0 || level_max < level_min)
        throw InvalidConfig("probe needs 0 <= level_min <= level_max");
    ProbeReport rep{k, N_int, delta, {}};
    SweepConfig cfg;
    cfg.family = k;
    for (int level = level_min; level <= level_max; ++level) {
        std::optional<cplx> at_int;
        for (double N : {double(N_int), N_int - delta, N_int + delta}) {
            ProbeEntry e;
            e.N = N;
            e.level = level;
            const cplx seed = at_int ? *at_int : wkb_seed(N, k, level);
            try {
                const EigenSolution sol = solve_point(cfg, N, level, seed);
                e.converged = true;
                e.E = sol.E;
                e.real = is_real(sol.E);
            } catch (const NotConverged& err) {
                e.E = err.best_E();
            } catch (const Error&) {
                e.E = {std::nan(""), std::nan("")};
            }
            if (N == N_int && e.converged)
                at_int = e.E;
            rep.entries.push_back(e);
        }
    }
    return rep;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r)
{
    os << "N,level,family,E_re,E_im,residue,converged,contour,r0\n";
    char buf[256];
    for (const auto& x : r.records) {
        std::snprintf(buf, sizeof buf, "%.10g,%d,%d,%.17g,%.17g,%.3e,%d,%s,%.6g\n", x.N, x.level, x.family,
                      x.E.real(), x.E.imag(), x.residue, x.converged ? 1 : 0,
                      std::string(to_string(x.contour_kind)).c_str(), x.r0);
        os << buf;
    }
}

nlohmann::json sweep_to_json(const SweepResult& r)
{
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& x : r.records)
        recs.push_back({{"N", x.N},
                        {"level", x.level},
                        {"family", x.family},
                        {"E_re", x.E.real()},
                        {"E_im", x.E.imag()},
                        {"residue", x.residue},
                        {"converged", x.converged},
                        {"contour", std::string(to_string(x.contour_kind))},
                        {"r0", x.r0}});
    nlohmann::json degs = nlohmann::json::array();
    for (const auto& d : r.degeneracies)
        degs.push_back({{"levels", {d.level_low, d.level_low + 1}},
                        {"N_star", d.N_star},
                        {"E_star", d.E_star},
                        {"bracket_width", d.bracket_width}});
    return {{"records", recs}, {"degeneracies", degs}};
}

nlohmann::json probe_to_json(const ProbeReport& r)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"N", e.N},
                           {"level", e.level},
                           {"converged", e.converged},
                           {"real", e.real},
                           {"E_re", e.E.real()},
                           {"E_im", e.E.imag()}});
    return {{"family", r.family}, {"N", r.N_int}, {"delta", r.delta}, {"entries", entries}};
}

} // namespace ptspec
