#include "ptspec/integrator.hpp"

#include "ptspec/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace ptspec {

namespace {

constexpr double kOverflow = 1e300;
constexpr int kMaxStages = 3;

struct Tableau {
    int s;
    std::array<double, kMaxStages> c;
    std::array<std::array<double, kMaxStages>, kMaxStages> a;
    std::array<double, kMaxStages> b;
};

const Tableau& tableau(int stages)
{
    static const Tableau gl2 = [] {
        const double r3 = std::sqrt(3.0);
        Tableau t{};
        t.s = 2;
        t.c = {0.5 - r3 / 6.0, 0.5 + r3 / 6.0, 0.0};
        t.a[0] = {0.25, 0.25 - r3 / 6.0, 0.0};
        t.a[1] = {0.25 + r3 / 6.0, 0.25, 0.0};
        t.b = {0.5, 0.5, 0.0};
        return t;
    }();
    static const Tableau gl3 = [] {
        const double r15 = std::sqrt(15.0);
        Tableau t{};
        t.s = 3;
        t.c = {0.5 - r15 / 10.0, 0.5, 0.5 + r15 / 10.0};
        t.a[0] = {5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0};
        t.a[1] = {5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0};
        t.a[2] = {5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0};
        t.b = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
        return t;
    }();
    return stages == 2 ? gl2 : gl3;
}

double approx_abs(const cplx& z) { return std::abs(z); }
double approx_abs(const detail::cdd& z) { return z.approx_abs(); }
cplx to_cplx(const cplx& z) { return z; }
cplx to_cplx(const detail::cdd& z) { return z.to_complex(); }

// In-place Gaussian elimination with partial pivoting on an n x n system, n <= 3.
template <class C>
void solve_small(std::array<std::array<C, kMaxStages>, kMaxStages>& m, std::array<C, kMaxStages>& rhs, int n)
{
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (approx_abs(m[r][col]) > approx_abs(m[piv][col]))
                piv = r;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(rhs[piv], rhs[col]);
        }
        const C d = m[col][col];
        for (int r = col + 1; r < n; ++r) {
            const C f = m[r][col] / d;
            for (int k = col; k < n; ++k)
                m[r][k] = m[r][k] - f * m[col][k];
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        C acc = rhs[r];
        for (int k = r + 1; k < n; ++k)
            acc = acc - m[r][k] * rhs[k];
        rhs[r] = acc / m[r][r];
    }
}

// Splits [p_min, p_max] at the contour's breakpoints so that none falls inside a step.
std::vector<double> build_grid(const Contour& c, int steps)
{
    std::vector<double> cuts{c.p_min()};
    for (double b : c.breakpoints())
        if (b > c.p_min() && b < c.p_max())
            cuts.push_back(b);
    cuts.push_back(c.p_max());

    const double span = c.p_max() - c.p_min();
    std::vector<double> grid{c.p_min()};
    int used = 0;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double lo = cuts[seg], hi = cuts[seg + 1];
        int n = seg + 2 == cuts.size() ? steps - used
                                       : std::max(1, static_cast<int>(std::lround(steps * (hi - lo) / span)));
        n = std::max(n, 1);
        used += n;
        for (int i = 1; i <= n; ++i)
            grid.push_back(i == n ? hi : lo + (hi - lo) * i / n);
    }
    return grid;
}

} // namespace

void IntegratorConfig::validate() const
{
    if (stages != 2 && stages != 3)
        throw InvalidConfig("integrator stages must be 2 or 3, got " + std::to_string(stages));
    if (steps < 100)
        throw InvalidConfig("integrator needs at least 100 steps, got " + std::to_string(steps));
}

State default_initial_state() noexcept { return {cplx{0.0, 0.0}, cplx{1e-7, 0.0}}; }

ShootingProblem::ShootingProblem(const Potential& potential, const Contour& contour, IntegratorConfig cfg)
    : potential_(potential), contour_(contour), cfg_(cfg)
{
    cfg_.validate();
    const Tableau& tab = tableau(cfg_.stages);
    s_ = tab.s;
    grid_p_ = build_grid(contour_, cfg_.steps);
    const int n = static_cast<int>(grid_p_.size()) - 1;

    grid_x_.resize(grid_p_.size());
    for (std::size_t j = 0; j < grid_p_.size(); ++j)
        grid_x_[j] = contour_.point(grid_p_[j]);

    const bool crossing = contour_.cut_crossing() && !potential_.integer_exponent();
    const bool continued = crossing && cfg_.cut_policy == CutPolicy::continuation;
    double arg_prev = 0.0;
    if (continued) {
        const cplx x0 = grid_x_.front();
        arg_prev = std::arg(cplx{-x0.imag(), x0.real()});
    }
    steps_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        StepData& st = steps_[j];
        st = StepData{};
        st.h = grid_p_[j + 1] - grid_p_[j];
        for (int i = 0; i < s_; ++i) {
            const double p = grid_p_[j] + tab.c[i] * st.h;
            const cplx x = contour_.point(p);
            st.d[i] = contour_.tangent(p);
            if (continued) {
                double a = std::arg(cplx{-x.imag(), x.real()});
                a += 2.0 * std::numbers::pi * std::round((arg_prev - a) / (2.0 * std::numbers::pi));
                arg_prev = a;
                st.v[i] = potential_.ix_pow_continued(x, a);
            } else if (crossing) {
                // arg in (-pi, pi], so a node exactly on the cut takes the value from its right.
                st.v[i] = potential_.ix_pow_continued(x, std::arg(cplx{-x.imag(), x.real()}));
            } else {
                st.v[i] = potential_.ix_pow(x);
            }
        }
        for (int i = 0; i < s_; ++i) {
            st.bd += tab.b[i] * st.d[i];
            for (int k = 0; k < s_; ++k) {
                st.c[i] += tab.a[i][k] * st.d[k];
                st.w[k] += tab.b[i] * st.d[i] * tab.a[i][k];
            }
            for (int l = 0; l < s_; ++l)
                for (int k = 0; k < s_; ++k)
                    st.m[i][l] += tab.a[i][k] * st.d[k] * tab.a[k][l];
        }
    }
}

Propagation ShootingProblem::propagate(cplx E, State init) const
{
    Propagation out;
    if (cfg_.record_trajectory)
        out.trajectory.reserve(grid_p_.size());
    run<cplx>(E, init, &out.trajectory);
    out.final = {out.trajectory.back().psi, out.trajectory.back().dpsi};
    if (!cfg_.record_trajectory)
        out.trajectory.clear();
    return out;
}

Propagation ShootingProblem::propagate(const detail::cdd& E, State init) const
{
    Propagation out;
    if (cfg_.record_trajectory)
        out.trajectory.reserve(grid_p_.size());
    run<detail::cdd>(E, init, &out.trajectory);
    out.final = {out.trajectory.back().psi, out.trajectory.back().dpsi};
    if (!cfg_.record_trajectory)
        out.trajectory.clear();
    return out;
}

cplx ShootingProblem::endpoint_psi(cplx E) const { return run<cplx>(E, default_initial_state(), nullptr); }

cplx ShootingProblem::endpoint_psi(const detail::cdd& E) const
{
    return to_cplx(run<detail::cdd>(E, default_initial_state(), nullptr));
}

template <class C>
C ShootingProblem::run(const C& E, State init, std::vector<TrajectoryPoint>* trajectory) const
{
    const Tableau& tab = tableau(s_);
    const int n = static_cast<int>(steps_.size());
    const bool record_all = trajectory && cfg_.record_trajectory;
    if (record_all)
        trajectory->push_back({grid_p_[0], grid_x_[0], init.psi, init.dpsi});

    C psi(init.psi), phi(init.dpsi);
    std::array<C, kMaxStages> D{}, kphi{};
    std::array<std::array<C, kMaxStages>, kMaxStages> m{};
    for (int j = 0; j < n; ++j) {
        const StepData& st = steps_[j];
        const double h = st.h;
        const double h2 = h * h;
        for (int i = 0; i < s_; ++i)
            D[i] = (E + C(st.v[i])) * st.d[i];
        // (I + h^2 D M) kphi = -D (psi + h c phi)
        for (int i = 0; i < s_; ++i) {
            for (int l = 0; l < s_; ++l) {
                m[i][l] = D[i] * (st.m[i][l] * h2);
                if (i == l)
                    m[i][l] = m[i][l] + C(cplx{1.0, 0.0});
            }
            kphi[i] = -(D[i] * (psi + phi * (st.c[i] * h)));
        }
        solve_small(m, kphi, s_);

        C dpsi = phi * (st.bd * h);
        C dphi = kphi[0] * (tab.b[0] * h);
        for (int l = 0; l < s_; ++l)
            dpsi = dpsi + kphi[l] * (st.w[l] * h2);
        for (int i = 1; i < s_; ++i)
            dphi = dphi + kphi[i] * (tab.b[i] * h);
        psi = psi + dpsi;
        phi = phi + dphi;

        const double apsi = approx_abs(psi);
        if (!(apsi <= kOverflow) || !(approx_abs(phi) <= kOverflow))
            throw Overflow("|psi| exceeded 1e300 at p = " + std::to_string(grid_p_[j + 1]));
        if (record_all)
            trajectory->push_back({grid_p_[j + 1], grid_x_[j + 1], to_cplx(psi), to_cplx(phi)});
    }
    if (trajectory && !record_all)
        trajectory->push_back({grid_p_.back(), grid_x_.back(), to_cplx(psi), to_cplx(phi)});
    return psi;
}

Propagation propagate(const Potential& potential, cplx E, const Contour& contour, State init,
                      const IntegratorConfig& cfg)
{
    return ShootingProblem(potential, contour, cfg).propagate(E, init);
}

double residue(const State& final) noexcept { return std::abs(final.psi); }

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& trajectory)
{
    const auto old = os.precision(17);
    os << "p,x_re,x_im,psi_re,psi_im\n";
    for (const auto& t : trajectory)
        os << t.p << ',' << t.x.real() << ',' << t.x.imag() << ',' << t.psi.real() << ',' << t.psi.imag() << '\n';
    os.precision(old);
}

} // namespace ptspec
