#include "ptspec/contour.hpp"
#include "ptspec/eigensolver.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/integrator.hpp"
#include "ptspec/paths.hpp"
#include "ptspec/sweep.hpp"
#include "ptspec/wedges.hpp"
#include "ptspec/wkb.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ptspec;
using nlohmann::json;

namespace {

constexpr int kExitNotConverged = 2;
constexpr int kExitInvalid = 3;

struct Options {
    std::string config;
    double n = 3.0;
    int family = 1;
    int level = 0;
    std::vector<std::string> contours;
    double r0 = 0.0;
    int steps = 4000;
    int max_iters = 200;
    std::string out;
    std::string format = "json";
    std::optional<double> guess;
    double energy = 1.0;

    // sweep
    double n_start = 2.0;
    double n_stop = 4.0;
    double n_step = 0.01;
    int level_min = 0;
    int level_max = 3;
    std::string journal;
    int threads = 0;
    bool descending = false;
    bool no_continuation = false;
    std::vector<int> locate;
    std::optional<int> probe;

    // diagram
    std::string kind = "both";
    double box = 3.0;
};

// Values from the config file fill in whatever was not given on the command line.
void apply_config(const CLI::App& app, Options& o)
{
    if (o.config.empty())
        return;
    std::ifstream in(o.config);
    if (!in)
        throw InvalidConfig("cannot open config file '" + o.config + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw InvalidConfig("config file must hold a JSON object");

    auto take = [&](const char* key, auto& field) {
        const std::string flag = std::string("--") + key;
        if (!j.contains(key) || app.count(flag) > 0)
            return;
        try {
            j.at(key).get_to(field);
        } catch (const json::exception&) {
            throw InvalidConfig(std::string("config field '") + key + "' has the wrong type");
        }
    };
    take("n", o.n);
    take("family", o.family);
    take("level", o.level);
    if (j.contains("contour") && j.at("contour").is_string() && app.count("--contour") == 0)
        o.contours = {j.at("contour").get<std::string>()};
    else
        take("contour", o.contours);
    take("r0", o.r0);
    take("steps", o.steps);
    take("max-iters", o.max_iters);
    take("out", o.out);
    take("format", o.format);
    take("energy", o.energy);
    take("n-start", o.n_start);
    take("n-stop", o.n_stop);
    take("n-step", o.n_step);
    take("level-min", o.level_min);
    take("level-max", o.level_max);
    take("journal", o.journal);
    take("threads", o.threads);
    take("descending", o.descending);
    take("no-continuation", o.no_continuation);
    take("locate", o.locate);
    take("kind", o.kind);
    take("box", o.box);
    if (j.contains("guess") && app.count("--guess") == 0)
        o.guess = j.at("guess").get<double>();
    if (j.contains("probe") && app.count("--probe") == 0)
        o.probe = j.at("probe").get<int>();
}

void check_common(const Options& o)
{
    if (!(o.n > 0.0))
        throw InvalidConfig("--n must be positive");
    if (o.format != "json" && o.format != "csv")
        throw InvalidConfig("--format must be json or csv");
    if (o.steps < 1)
        throw InvalidConfig("--steps must be positive");
    if (o.r0 < 0.0)
        throw InvalidConfig("--r0 must not be negative");
    if (o.level < 0)
        throw InvalidConfig("--level must not be negative");
    if (o.max_iters < 1)
        throw InvalidConfig("--max-iters must be positive");
}

LMConfig lm_of(const Options& o)
{
    LMConfig lm;
    lm.max_iters = o.max_iters;
    return lm;
}

IntegratorConfig integrator_of(const Options& o)
{
    IntegratorConfig ic;
    ic.steps = o.steps;
    return ic;
}

// Writes to --out when given, stdout otherwise.
void emit(const Options& o, const std::string& text)
{
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f)
        throw InvalidConfig("cannot write '" + o.out + "'");
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

Contour contour_by_name(const std::string& name, double N, double r0)
{
    if (name.size() > 5 && name.ends_with(".json")) {
        std::ifstream in(name);
        if (!in)
            throw InvalidConfig("cannot open contour file '" + name + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw InvalidConfig(std::string("contour file is not valid JSON: ") + e.what());
        }
        return contour_from_json(j);
    }
    return named_contour(name, N, r0);
}

int cmd_wedges(const Options& o)
{
    const auto families = family_catalog(o.n, o.energy);
    const TurningPointSet tps = turning_points(Potential(o.n), cplx{o.energy, 0.0});
    if (o.format == "csv") {
        std::ostringstream s;
        s << "k,label,theta_left,theta_right,width,gamma,hypothetical\n";
        for (const auto& f : families)
            s << f.k << ',' << f.label << ',' << fmt(f.theta_left) << ',' << fmt(f.theta_right) << ','
              << fmt(f.width) << ',' << (f.gamma ? fmt(*f.gamma) : "") << ',' << (f.hypothetical ? 1 : 0) << '\n';
        emit(o, s.str());
        return 0;
    }
    json j{{"N", o.n}, {"energy", o.energy}, {"wedge_width", wedge_width(o.n)}};
    json fam = json::array();
    for (const auto& f : families) {
        json e{{"k", f.k},
               {"label", f.label},
               {"theta_left", f.theta_left},
               {"theta_right", f.theta_right},
               {"width", f.width},
               {"hypothetical", f.hypothetical}};
        e["gamma"] = f.gamma ? json(*f.gamma) : json(nullptr);
        if (f.turning_right && f.turning_left) {
            e["turning_right"] = {f.turning_right->real(), f.turning_right->imag()};
            e["turning_left"] = {f.turning_left->real(), f.turning_left->imag()};
        }
        fam.push_back(e);
    }
    j["families"] = fam;
    json tp = json::array();
    for (const cplx& x : tps.points())
        tp.push_back({x.real(), x.imag()});
    j["turning_points"] = tp;
    emit(o, dump(j));
    return 0;
}

EigenSolution solve_named(const Options& o, const std::string& name)
{
    const double gamma = family_gamma(o.n, o.family);
    if (name == "default") {
        SweepConfig cfg;
        cfg.family = o.family;
        cfg.r0 = o.r0;
        cfg.integrator = integrator_of(o);
        cfg.lm = lm_of(o);
        const cplx seed = o.guess ? cplx{*o.guess, 0.0} : cplx{wkb_energy(o.n, gamma, o.level), 0.0};
        return solve_point(cfg, o.n, o.level, seed);
    }
    const double r0 = o.r0 > 0.0 ? o.r0 : 4.0;
    const ShootingProblem problem(Potential(o.n), contour_by_name(name, o.n, r0), integrator_of(o));
    EigenSolution s = o.guess ? solve_eigenvalue(problem, lm_of(o), cplx{*o.guess, 0.0})
                              : solve_level(problem, lm_of(o), o.level, gamma);
    s.family = o.family;
    s.level = o.level;
    return s;
}

int cmd_solve(const Options& o)
{
    const std::string name = o.contours.empty() ? "default" : o.contours.front();
    const EigenSolution s = solve_named(o, name);
    if (o.format == "csv") {
        std::ostringstream t;
        write_trajectory_csv(t, s.trajectory);
        emit(o, t.str());
        return 0;
    }
    emit(o, dump(json(s)));
    if (!o.out.empty()) {
        std::ofstream t(o.out + ".trajectory.csv");
        write_trajectory_csv(t, s.trajectory);
    }
    return 0;
}

int cmd_sweep(const Options& o)
{
    SweepConfig cfg;
    cfg.n_start = o.n_start;
    cfg.n_stop = o.n_stop;
    cfg.n_step = o.n_step;
    cfg.level_min = o.level_min;
    cfg.level_max = o.level_max;
    cfg.family = o.family;
    cfg.continuation = !o.no_continuation;
    cfg.descending = o.descending;
    cfg.output_path = o.journal;
    cfg.r0 = o.r0;
    cfg.threads = o.threads;
    cfg.integrator = integrator_of(o);
    cfg.lm = lm_of(o);
    cfg.validate();

    if (o.probe) {
        const ProbeReport r = near_integer_probe(o.family, *o.probe, o.level_min, o.level_max);
        emit(o, dump(probe_to_json(r)));
        return 0;
    }
    if (!o.locate.empty()) {
        json arr = json::array();
        for (int low : o.locate) {
            const Degeneracy d = locate_degeneracy(cfg, low);
            arr.push_back({{"level_low", d.level_low},
                           {"N_star", d.N_star},
                           {"E_star", d.E_star},
                           {"bracket_width", d.bracket_width}});
        }
        emit(o, dump(json{{"family", o.family}, {"degeneracies", arr}}));
        return 0;
    }
    const SweepResult r = run_sweep(cfg);
    if (o.format == "csv") {
        std::ostringstream s;
        write_sweep_csv(s, r);
        emit(o, s.str());
    } else {
        emit(o, dump(sweep_to_json(r)));
    }
    return 0;
}

int cmd_wkb(const Options& o)
{
    const auto families = family_catalog(o.n, 1.0);
    json rows = json::array();
    std::ostringstream s;
    s << "family,gamma,level,E\n";
    for (const auto& f : families) {
        if (!f.gamma || std::cos(*f.gamma) <= 0.0)
            continue;
        for (int n = o.level_min; n <= o.level_max; ++n) {
            const double E = wkb_energy(o.n, *f.gamma, n);
            rows.push_back({{"family", f.k}, {"gamma", *f.gamma}, {"level", n}, {"E", E}});
            s << f.k << ',' << fmt(*f.gamma) << ',' << n << ',' << fmt(E) << '\n';
        }
    }
    if (o.format == "csv") {
        emit(o, s.str());
        return 0;
    }
    json j{{"N", o.n}, {"levels", rows}};
    json ratios = json::array();
    for (std::size_t a = 0; a < families.size(); ++a)
        for (std::size_t b = a + 1; b < families.size(); ++b) {
            const auto& f1 = families[a];
            const auto& f2 = families[b];
            if (!f1.gamma || !f2.gamma || std::cos(*f1.gamma) <= 0.0 || std::cos(*f2.gamma) <= 0.0)
                continue;
            ratios.push_back({{"from", f1.k}, {"to", f2.k}, {"ratio", family_ratio(o.n, *f1.gamma, *f2.gamma)}});
        }
    j["ratios"] = ratios;
    emit(o, dump(j));
    return 0;
}

int cmd_diagram(const Options& o)
{
    if (!(o.box > 0.0))
        throw InvalidConfig("--box must be positive");
    const Box box{-o.box, o.box, -o.box, o.box};
    const Potential V(o.n);
    const cplx E{o.energy, 0.0};
    StokesDiagram d;
    if (o.kind == "both")
        d = trace_stokes_diagram(V, E, box);
    else if (o.kind == "stokes")
        d = trace_stokes_diagram(V, E, box, LineKind::stokes);
    else if (o.kind == "anti-stokes" || o.kind == "anti_stokes")
        d = trace_stokes_diagram(V, E, box, LineKind::anti_stokes);
    else
        throw InvalidConfig("--kind must be both, stokes or anti-stokes");

    if (o.format == "csv") {
        std::ostringstream s;
        s << "line,kind,start_tp,end_tp,x_re,x_im\n";
        for (std::size_t i = 0; i < d.lines.size(); ++i) {
            const auto& l = d.lines[i];
            for (const cplx& x : l.points)
                s << i << ',' << (l.kind == LineKind::stokes ? "stokes" : "anti_stokes") << ',' << l.start_tp << ','
                  << l.end_tp << ',' << fmt(x.real()) << ',' << fmt(x.imag()) << '\n';
        }
        emit(o, s.str());
        return 0;
    }
    json j = diagram_to_json(d);
    j["N"] = o.n;
    emit(o, dump(j));
    return 0;
}

bool same_point(cplx a, cplx b) { return std::abs(a - b) < 1e-9; }

int cmd_compare_paths(const Options& o)
{
    std::vector<NamedContour> paths;
    if (!o.contours.empty()) {
        const double r0 = o.r0 > 0.0 ? o.r0 : 4.0;
        for (const auto& name : o.contours)
            paths.push_back({name, contour_by_name(name, o.n, r0)});
    } else if (o.n == 2.0) {
        paths = harmonic_paths(o.r0 > 0.0 ? o.r0 : kHarmonicHalfWidth);
    } else {
        SixPathGeometry g;
        if (o.r0 > 0.0)
            g.r_cd = o.r0;
        paths = six_paths(o.n, g);
    }

    const double gamma = family_gamma(o.n, 1);
    struct Row {
        std::string name;
        std::optional<EigenSolution> sol;
        std::string error;
    };
    std::vector<Row> rows;
    for (const auto& p : paths) {
        Row r{p.name, std::nullopt, ""};
        try {
            const ShootingProblem problem(Potential(o.n), p.contour, integrator_of(o));
            r.sol = o.guess ? solve_eigenvalue(problem, lm_of(o), cplx{*o.guess, 0.0})
                            : solve_level(problem, lm_of(o), o.level, gamma);
        } catch (const NotConverged& e) {
            r.error = e.what();
        } catch (const Error& e) {
            r.error = e.what();
        }
        rows.push_back(std::move(r));
    }

    // spread over converged paths that stay off the cut
    double lo = INFINITY, hi = -INFINITY, im = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].sol || paths[i].contour.cut_crossing())
            continue;
        lo = std::min(lo, rows[i].sol->E.real());
        hi = std::max(hi, rows[i].sol->E.real());
        im = std::max(im, std::abs(rows[i].sol->E.imag()));
    }
    const double spread = hi >= lo ? hi - lo : 0.0;

    json events = json::array();
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
            if (!rows[a].sol || !rows[b].sol)
                continue;
            const Contour& c1 = paths[a].contour;
            const Contour& c2 = paths[b].contour;
            if (!same_point(c1.endpoint_a(), c2.endpoint_a()) || !same_point(c1.endpoint_b(), c2.endpoint_b()))
                continue;
            try {
                for (const auto& ev : crossing_events(*rows[a].sol, *rows[b].sol, intersections(c1, c2)))
                    events.push_back({{"paths", {rows[a].name, rows[b].name}},
                                      {"x", {ev.x.real(), ev.x.imag()}},
                                      {"psi1", {ev.psi1.real(), ev.psi1.imag()}},
                                      {"psi2", {ev.psi2.real(), ev.psi2.imag()}},
                                      {"gap", ev.gap}});
            } catch (const DegenerateOverlap&) {
                events.push_back({{"paths", {rows[a].name, rows[b].name}}, {"overlap", true}});
            } catch (const DomainError& e) {
                events.push_back({{"paths", {rows[a].name, rows[b].name}}, {"skipped", e.what()}});
            }
        }

    if (o.format == "csv") {
        std::ostringstream s;
        s << "path,converged,E_re,E_im,residue,cut_crossing\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            s << r.name << ',' << (r.sol ? 1 : 0) << ',' << (r.sol ? fmt(r.sol->E.real()) : "") << ','
              << (r.sol ? fmt(r.sol->E.imag()) : "") << ',' << (r.sol ? fmt(r.sol->residue) : "") << ','
              << (paths[i].contour.cut_crossing() ? 1 : 0) << '\n';
        }
        emit(o, s.str());
        return 0;
    }
    json list = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        json e{{"path", r.name}, {"cut_crossing", paths[i].contour.cut_crossing()}, {"converged", r.sol.has_value()}};
        if (r.sol) {
            e["E_re"] = r.sol->E.real();
            e["E_im"] = r.sol->E.imag();
            e["residue"] = r.sol->residue;
        } else {
            e["error"] = r.error;
        }
        list.push_back(e);
    }
    emit(o, dump(json{{"N", o.n},
                      {"level", o.level},
                      {"paths", list},
                      {"spread", spread},
                      {"max_abs_im", im},
                      {"path_independent", spread <= 1e-9 && im <= 1e-9},
                      {"crossing_events", events}}));
    return 0;
}

int error_exit(int code, const std::string& kind, const std::string& what, const json& extra = json::object())
{
    json j{{"error", kind}, {"message", what}};
    j.update(extra);
    std::cout << dump(j);
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Eigenvalues of -psi'' - (ix)^N psi = E psi on complex contours"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* c) {
        c->add_option("--config", o.config, "JSON file with option values; flags override it");
        c->add_option("--n", o.n, "exponent N");
        c->add_option("--out", o.out, "output file (stdout if omitted)");
        c->add_option("--format", o.format, "json or csv");
    };

    auto* wedges = app.add_subcommand("wedges", "wedge and turning-point catalog");
    common(wedges);
    wedges->add_option("--energy", o.energy, "energy used to place turning points");

    auto* solve = app.add_subcommand("solve", "one eigenvalue");
    common(solve);
    solve->add_option("--family", o.family);
    solve->add_option("--level", o.level);
    solve->add_option("--contour", o.contours, "contour name or contour JSON file");
    solve->add_option("--r0", o.r0, "endpoint radius (0 = automatic for the default contour, 4 otherwise)");
    solve->add_option("--steps", o.steps);
    solve->add_option("--guess", o.guess, "initial energy instead of the WKB seed");
    solve->add_option("--max-iters", o.max_iters, "Levenberg-Marquardt iteration cap");

    auto* sweep = app.add_subcommand("sweep", "levels over a grid in N");
    common(sweep);
    sweep->add_option("--family", o.family);
    sweep->add_option("--n-start", o.n_start);
    sweep->add_option("--n-stop", o.n_stop);
    sweep->add_option("--n-step", o.n_step);
    sweep->add_option("--level-min", o.level_min);
    sweep->add_option("--level-max", o.level_max);
    sweep->add_option("--r0", o.r0);
    sweep->add_option("--steps", o.steps);
    sweep->add_option("--max-iters", o.max_iters);
    sweep->add_option("--journal", o.journal, "append-only journal used to resume");
    sweep->add_option("--threads", o.threads);
    sweep->add_flag("--descending", o.descending);
    sweep->add_flag("--no-continuation", o.no_continuation);
    sweep->add_option("--locate", o.locate, "locate the merger of levels L and L+1 instead");
    sweep->add_option("--probe", o.probe, "probe around this integer N instead");

    auto* wkb = app.add_subcommand("wkb", "leading-order WKB energies");
    common(wkb);
    wkb->add_option("--level-min", o.level_min);
    wkb->add_option("--level-max", o.level_max);

    auto* diagram = app.add_subcommand("diagram", "Stokes and anti-Stokes lines");
    common(diagram);
    diagram->add_option("--energy", o.energy);
    diagram->add_option("--kind", o.kind, "both, stokes or anti-stokes");
    diagram->add_option("--box", o.box, "half-size of the tracing box");

    auto* compare = app.add_subcommand("compare-paths", "same level on several contours");
    common(compare);
    compare->add_option("--level", o.level);
    compare->add_option("--contour", o.contours, "contour names; default set depends on N");
    compare->add_option("--r0", o.r0, "half-width for N = 2, CD radius otherwise");
    compare->add_option("--steps", o.steps);
    compare->add_option("--guess", o.guess);
    compare->add_option("--max-iters", o.max_iters);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        apply_config(*cmd, o);
        check_common(o);
        const std::string name = cmd->get_name();
        if (name == "wedges")
            return cmd_wedges(o);
        if (name == "solve")
            return cmd_solve(o);
        if (name == "sweep")
            return cmd_sweep(o);
        if (name == "wkb")
            return cmd_wkb(o);
        if (name == "diagram")
            return cmd_diagram(o);
        return cmd_compare_paths(o);
    } catch (const NotConverged& e) {
        return error_exit(kExitNotConverged, "NotConverged", e.what(),
                          {{"best_E", {e.best_E().real(), e.best_E().imag()}},
                           {"best_residue", e.best_residue()},
                           {"iterations", e.iterations()}});
    } catch (const InvalidConfig& e) {
        return error_exit(kExitInvalid, "InvalidConfig", e.what());
    } catch (const DomainError& e) {
        return error_exit(kExitInvalid, "DomainError", e.what());
    } catch (const Error& e) {
        return error_exit(1, "Error", e.what());
    }
}
