#include "ptspec/contour.hpp"

#include "ptspec/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace ptspec {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double poly_value(const std::vector<double>& c, double x)
{
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        v = v * x + *it;
    return v;
}

double poly_slope(const std::vector<double>& c, double x)
{
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;)
        v = v * x + static_cast<double>(k) * c[k];
    return v;
}

struct Circle {
    cplx center;
    double radius;
    double start_angle;
    double sweep; // signed
};

Circle arc_through(cplx a, cplx h, cplx b)
{
    const double na = std::norm(a), nh = std::norm(h), nb = std::norm(b);
    const cplx num = na * (h - b) + nh * (b - a) + nb * (a - h);
    const cplx den = std::conj(a) * (h - b) + std::conj(h) * (b - a) + std::conj(b) * (a - h);
    if (std::abs(den) < 1e-14)
        throw DomainError("cross-cut arc: boundary points and apex are collinear");
    const cplx c = num / den;
    Circle circ{c, std::abs(a - c), std::arg(a - c), 0.0};
    const auto wrap = [](double t) {
        t = std::fmod(t, 2.0 * pi);
        return t < 0 ? t + 2.0 * pi : t;
    };
    const double ah = std::arg(h - c) - circ.start_angle;
    const double ab = std::arg(b - c) - circ.start_angle;
    // Pick the orientation that meets the apex before the far endpoint.
    if (wrap(ah) < wrap(ab))
        circ.sweep = wrap(ab);
    else
        circ.sweep = -wrap(-ab);
    return circ;
}

} // namespace

std::string_view to_string(ContourKind kind) noexcept
{
    switch (kind) {
    case ContourKind::hyperbolic: return "hyperbolic";
    case ContourKind::rational_sqrt: return "rational_sqrt";
    case ContourKind::sinusoidal: return "sinusoidal";
    case ContourKind::knot: return "knot";
    case ContourKind::line: return "line";
    case ContourKind::real_axis: return "real_axis";
    case ContourKind::polyline_v: return "polyline_v";
    case ContourKind::polynomial: return "polynomial";
    case ContourKind::cross_cut: return "cross_cut";
    }
    return "unknown";
}

ContourKind contour_kind_from_string(std::string_view name)
{
    constexpr std::array kinds{ContourKind::hyperbolic, ContourKind::rational_sqrt, ContourKind::sinusoidal,
                               ContourKind::knot,       ContourKind::line,          ContourKind::real_axis,
                               ContourKind::polyline_v, ContourKind::polynomial,    ContourKind::cross_cut};
    for (auto k : kinds)
        if (to_string(k) == name)
            return k;
    throw InvalidConfig("unknown contour kind '" + std::string(name) + "'");
}

cplx boundary_point(double r, double theta) { return std::polar(r, theta); }

Contour::Contour(ContourParams params, double p_min, double p_max, cplx anchor_a, cplx anchor_b)
    : params_(std::move(params)), p_min_(p_min), p_max_(p_max), anchor_a_(anchor_a), anchor_b_(anchor_b)
{
    if (!(p_max_ > p_min_))
        throw DomainError("contour parameter interval is empty");
    pin_endpoints();
}

void Contour::pin_endpoints()
{
    fix_a_ = anchor_a_ - raw_point(p_min_);
    fix_b_ = anchor_b_ - raw_point(p_max_);
}

namespace {

// Below the origin for theta < 0. For theta > 0 either the mirror image (over)
// or an upward branch whose vertex stays at -ia; the dip term dies off so the
// asymptotes still pass through the origin.
double hyperbola_height(const HyperbolicParams& h, double p)
{
    const double s = std::sqrt(h.a * h.a + p * p * std::pow(std::tan(h.theta), 2));
    if (h.theta < 0.0)
        return -s;
    if (h.over)
        return s;
    return s - 2.0 * h.a * h.a * h.a / (h.a * h.a + p * p);
}

} // namespace

Contour Contour::hyperbolic(double a, double theta_right, double re_extent, bool over)
{
    if (!(a > 0.0))
        throw DomainError("hyperbolic contour needs a > 0");
    if (!(std::abs(theta_right) < pi / 2.0 && theta_right != 0.0))
        throw DomainError("hyperbolic contour needs 0 < |theta| < pi/2");
    if (!(re_extent > 0.0))
        throw DomainError("hyperbolic contour needs a positive extent");
    if (over && theta_right < 0.0)
        throw DomainError("an over-the-origin hyperbolic contour needs theta > 0");
    const HyperbolicParams hp{a, theta_right, over};
    const double y = hyperbola_height(hp, re_extent);
    return Contour(hp, -re_extent, re_extent, {-re_extent, y}, {re_extent, y});
}

Contour Contour::rational_sqrt(double c, double t, double theta, double re_extent)
{
    if (!(t > 0.0))
        throw DomainError("rational-sqrt contour needs t > 0");
    if (!(theta > 0.0 && theta < pi / 2.0))
        throw DomainError("rational-sqrt contour needs 0 < theta < pi/2");
    if (!(re_extent > 0.0))
        throw DomainError("rational-sqrt contour needs a positive extent");
    const double k = std::pow(1.0 / std::tan(theta), 2);
    const double y = (re_extent * re_extent - c) / std::sqrt(k * re_extent * re_extent + t);
    return Contour(RationalSqrtParams{c, t, theta}, -re_extent, re_extent, {-re_extent, y}, {re_extent, y});
}

Contour Contour::sinusoidal(cplx a, cplx b, double amplitude, double periods)
{
    if (!(b.real() > a.real()))
        throw DomainError("sinusoidal contour runs left to right: Re(B) must exceed Re(A)");
    return Contour(SinusoidalParams{amplitude, periods}, a.real(), b.real(), a, b);
}

Contour Contour::knot(cplx a, cplx b, double rotation, double depth, double p_extent)
{
    if (!(p_extent - 2.0 * std::sin(p_extent) > 0.5))
        throw DomainError("knot contour needs p_extent beyond the self-crossing (p - 2 sin p > 0.5)");
    if (a == b)
        throw DomainError("knot contour needs distinct endpoints");
    return Contour(KnotParams{rotation, depth, p_extent}, -p_extent, p_extent, a, b);
}

Contour Contour::line(cplx a, cplx b)
{
    if (a == b)
        throw DomainError("line contour needs distinct endpoints");
    return Contour(LineParams{}, 0.0, 1.0, a, b);
}

Contour Contour::real_axis(double r_extent)
{
    if (!(r_extent > 0.0))
        throw DomainError("real-axis contour needs a positive extent");
    return Contour(RealAxisParams{}, -r_extent, r_extent, {-r_extent, 0.0}, {r_extent, 0.0});
}

Contour Contour::polyline_v(double r0, double theta_right)
{
    if (!(r0 > 0.0))
        throw DomainError("polyline contour needs r0 > 0");
    const cplx b = std::polar(r0, theta_right);
    return Contour(PolylineVParams{theta_right}, -r0, r0, -std::conj(b), b);
}

Contour Contour::polynomial(cplx a, cplx b, std::vector<double> coeffs)
{
    if (!(b.real() > a.real()))
        throw DomainError("polynomial contour runs left to right: Re(B) must exceed Re(A)");
    if (coeffs.empty())
        coeffs.push_back(0.0);
    return Contour(PolynomialParams{std::move(coeffs)}, a.real(), b.real(), a, b);
}

Contour Contour::cross_cut(cplx a, cplx b, double height)
{
    if (!(height > 0.0))
        throw DomainError("cross-cut contour needs a positive apex height");
    if (!(height > std::max(a.imag(), b.imag())))
        throw DomainError("cross-cut apex must lie above both boundary points");
    const auto circ = arc_through(a, {0.0, height}, b);
    return Contour(CrossCutParams{height}, 0.0, std::abs(circ.sweep) * circ.radius, a, b);
}

cplx Contour::raw_point(double p) const
{
    return std::visit(
        overloaded{
            [&](const HyperbolicParams& h) { return cplx{p, hyperbola_height(h, p)}; },
            [&](const RationalSqrtParams& r) {
                const double k = std::pow(1.0 / std::tan(r.theta), 2);
                return cplx{p, (p * p - r.c) / std::sqrt(k * p * p + r.t)};
            },
            [&](const SinusoidalParams& s) {
                const double span = p_max_ - p_min_;
                const double u = (p - p_min_) / span;
                const double mid = 0.5 * (p_min_ + p_max_);
                const double base = anchor_a_.imag() + (anchor_b_.imag() - anchor_a_.imag()) * u;
                return cplx{p, base + s.amplitude * std::sin(2.0 * pi * s.periods * (p - mid) / span)};
            },
            [&](const KnotParams& k) {
                const cplx chord = anchor_b_ - anchor_a_;
                const cplx frame = chord / std::abs(chord) * std::polar(1.0, k.rotation);
                const double pe = k.p_extent;
                const double sx = 0.5 * std::abs(chord) / (pe - 2.0 * std::sin(pe));
                const double sy = k.depth / (pe * pe);
                const cplx z{sx * (p - 2.0 * std::sin(p)), sy * (p * p - pe * pe)};
                return 0.5 * (anchor_a_ + anchor_b_) + frame * z;
            },
            [&](const LineParams&) { return anchor_a_ + (anchor_b_ - anchor_a_) * p; },
            [&](const RealAxisParams&) { return cplx{p, 0.0}; },
            [&](const PolylineVParams& v) {
                return p >= 0.0 ? p * std::polar(1.0, v.theta_right) : p * std::polar(1.0, -v.theta_right);
            },
            [&](const PolynomialParams& poly) { return cplx{p, poly_value(poly.coeffs, p)}; },
            [&](const CrossCutParams& cc) {
                const auto circ = arc_through(anchor_a_, {0.0, cc.height}, anchor_b_);
                const double dir = circ.sweep >= 0 ? 1.0 : -1.0;
                return circ.center + std::polar(circ.radius, circ.start_angle + dir * p / circ.radius);
            },
        },
        params_);
}

cplx Contour::raw_tangent(double p) const
{
    return std::visit(
        overloaded{
            [&](const HyperbolicParams& h) {
                const double t2 = std::pow(std::tan(h.theta), 2);
                const double d = p * t2 / std::sqrt(h.a * h.a + p * p * t2);
                if (h.theta < 0.0)
                    return cplx{1.0, -d};
                if (h.over)
                    return cplx{1.0, d};
                const double q = h.a * h.a + p * p;
                return cplx{1.0, d + 4.0 * h.a * h.a * h.a * p / (q * q)};
            },
            [&](const RationalSqrtParams& r) {
                const double k = std::pow(1.0 / std::tan(r.theta), 2);
                const double d = k * p * p + r.t;
                return cplx{1.0, p * (2.0 * d - k * (p * p - r.c)) / (d * std::sqrt(d))};
            },
            [&](const SinusoidalParams& s) {
                const double span = p_max_ - p_min_;
                const double mid = 0.5 * (p_min_ + p_max_);
                const double w = 2.0 * pi * s.periods / span;
                const double slope = (anchor_b_.imag() - anchor_a_.imag()) / span;
                return cplx{1.0, slope + s.amplitude * w * std::cos(w * (p - mid))};
            },
            [&](const KnotParams& k) {
                const cplx chord = anchor_b_ - anchor_a_;
                const cplx frame = chord / std::abs(chord) * std::polar(1.0, k.rotation);
                const double pe = k.p_extent;
                const double sx = 0.5 * std::abs(chord) / (pe - 2.0 * std::sin(pe));
                const double sy = k.depth / (pe * pe);
                return frame * cplx{sx * (1.0 - 2.0 * std::cos(p)), 2.0 * sy * p};
            },
            [&](const LineParams&) { return anchor_b_ - anchor_a_; },
            [&](const RealAxisParams&) { return cplx{1.0, 0.0}; },
            [&](const PolylineVParams& v) {
                return p >= 0.0 ? std::polar(1.0, v.theta_right) : std::polar(1.0, -v.theta_right);
            },
            [&](const PolynomialParams& poly) { return cplx{1.0, poly_slope(poly.coeffs, p)}; },
            [&](const CrossCutParams& cc) {
                const auto circ = arc_through(anchor_a_, {0.0, cc.height}, anchor_b_);
                const double dir = circ.sweep >= 0 ? 1.0 : -1.0;
                return I * dir * std::polar(1.0, circ.start_angle + dir * p / circ.radius);
            },
        },
        params_);
}

cplx Contour::point(double p) const
{
    if (reversed_)
        p = p_min_ + p_max_ - p;
    const double u = (p - p_min_) / (p_max_ - p_min_);
    return raw_point(p) + fix_a_ * (1.0 - u) + fix_b_ * u;
}

cplx Contour::tangent(double p) const
{
    const double sign = reversed_ ? -1.0 : 1.0;
    if (reversed_)
        p = p_min_ + p_max_ - p;
    return sign * (raw_tangent(p) + (fix_b_ - fix_a_) / (p_max_ - p_min_));
}

ContourKind Contour::kind() const noexcept
{
    return static_cast<ContourKind>(params_.index());
}

bool Contour::cut_crossing() const noexcept
{
    if (const auto* h = std::get_if<HyperbolicParams>(&params_))
        return h->over;
    return std::holds_alternative<CrossCutParams>(params_);
}

std::vector<double> Contour::breakpoints() const
{
    if (std::holds_alternative<PolylineVParams>(params_))
        return {0.0};
    return {};
}

Contour Contour::reversed() const
{
    Contour c = *this;
    c.reversed_ = !reversed_;
    return c;
}

std::vector<cplx> Contour::sample(int n) const
{
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        out.push_back(point(p_min_ + (p_max_ - p_min_) * i / n));
    return out;
}

double distance_to_cut(const Contour& c, int samples)
{
    double best = INFINITY;
    for (const cplx x : c.sample(samples)) {
        const double d = x.imag() > 0.0 ? std::abs(x.real()) : std::abs(x);
        best = std::min(best, d);
    }
    return best;
}

namespace {

struct Sampled {
    std::vector<double> p;
    std::vector<cplx> x;
};

Sampled sample_contour(const Contour& c, int n)
{
    Sampled s;
    s.p.resize(static_cast<std::size_t>(n) + 1);
    s.x.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        s.p[i] = c.p_min() + (c.p_max() - c.p_min()) * i / n;
        s.x[i] = c.point(s.p[i]);
    }
    return s;
}

// Newton on x1(p1) - x2(p2) = 0 starting from the linear-segment estimate.
bool refine(const Contour& c1, const Contour& c2, double& p1, double& p2)
{
    for (int it = 0; it < 60; ++it) {
        const cplx f = c1.point(p1) - c2.point(p2);
        if (std::abs(f) < 1e-13)
            return true;
        const cplx d1 = c1.tangent(p1);
        const cplx d2 = -c2.tangent(p2);
        const double det = cross(d1, d2);
        if (std::abs(det) < 1e-300)
            return false;
        // Solve [d1 d2] [dp1 dp2]^T = -f as a real 2x2 system.
        const double dp1 = -cross(f, d2) / det;
        const double dp2 = -cross(d1, f) / det;
        p1 = std::clamp(p1 + dp1, c1.p_min(), c1.p_max());
        p2 = std::clamp(p2 + dp2, c2.p_min(), c2.p_max());
    }
    return std::abs(c1.point(p1) - c2.point(p2)) < 1e-10;
}

enum class SegmentHit { none, point, overlap };

SegmentHit segment_hit(cplx a, cplx b, cplx c, cplx d, double& s, double& t)
{
    const cplx r = b - a, q = d - c;
    const double denom = cross(r, q);
    const double scale = std::abs(r) * std::abs(q);
    if (std::abs(denom) <= 1e-12 * scale) {
        // Parallel: overlap only if collinear with positive-length projection.
        if (std::abs(cross(c - a, r)) > 1e-12 * std::abs(r) * std::max(1.0, std::abs(c - a)))
            return SegmentHit::none;
        const double rr = std::norm(r);
        const double t0 = ((c - a) * std::conj(r)).real() / rr;
        const double t1 = ((d - a) * std::conj(r)).real() / rr;
        const double lo = std::max(0.0, std::min(t0, t1));
        const double hi = std::min(1.0, std::max(t0, t1));
        return hi - lo > 1e-9 ? SegmentHit::overlap : SegmentHit::none;
    }
    s = cross(c - a, q) / denom;
    t = cross(c - a, r) / denom;
    constexpr double slack = 1e-12;
    if (s < -slack || s > 1.0 + slack || t < -slack || t > 1.0 + slack)
        return SegmentHit::none;
    return SegmentHit::point;
}

bool box_disjoint(cplx a, cplx b, cplx c, cplx d)
{
    return std::max(a.real(), b.real()) < std::min(c.real(), d.real()) ||
           std::max(c.real(), d.real()) < std::min(a.real(), b.real()) ||
           std::max(a.imag(), b.imag()) < std::min(c.imag(), d.imag()) ||
           std::max(c.imag(), d.imag()) < std::min(a.imag(), b.imag());
}

void push_unique(std::vector<Intersection>& out, const Intersection& hit)
{
    for (const auto& h : out)
        if (std::abs(h.x - hit.x) < 1e-8)
            return;
    out.push_back(hit);
}

std::vector<Intersection> scan(const Contour& c1, const Contour& c2, int n, bool self)
{
    const Sampled s1 = sample_contour(c1, n);
    const Sampled s2 = self ? s1 : sample_contour(c2, n);
    const std::array<cplx, 4> ends{c1.endpoint_a(), c1.endpoint_b(), c2.endpoint_a(), c2.endpoint_b()};
    const auto at_shared_end = [&](cplx x) {
        const bool on1 = std::abs(x - ends[0]) < 1e-9 || std::abs(x - ends[1]) < 1e-9;
        const bool on2 = std::abs(x - ends[2]) < 1e-9 || std::abs(x - ends[3]) < 1e-9;
        return on1 && on2;
    };

    std::vector<Intersection> out;
    for (int i = 0; i < n; ++i) {
        for (int j = self ? i + 2 : 0; j < n; ++j) {
            const cplx a = s1.x[i], b = s1.x[i + 1], c = s2.x[j], d = s2.x[j + 1];
            if (box_disjoint(a, b, c, d))
                continue;
            double s = 0.0, t = 0.0;
            const auto hit = segment_hit(a, b, c, d, s, t);
            if (hit == SegmentHit::none)
                continue;
            if (hit == SegmentHit::overlap)
                throw DegenerateOverlap("contours overlap along a segment; intersections are not transversal");
            double p1 = s1.p[i] + s * (s1.p[i + 1] - s1.p[i]);
            double p2 = s2.p[j] + t * (s2.p[j + 1] - s2.p[j]);
            if (!refine(c1, c2, p1, p2))
                continue;
            const cplx x = c1.point(p1);
            if (at_shared_end(x))
                continue;
            if (self && std::abs(p1 - p2) < 1e-9)
                continue;
            push_unique(out, {std::min(p1, p2), self ? std::max(p1, p2) : p2, x});
            if (!self)
                out.back() = {p1, p2, x};
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.p1 < r.p1; });
    return out;
}

} // namespace

std::vector<Intersection> intersections(const Contour& c1, const Contour& c2, int samples)
{
    if (samples < 1000)
        throw DomainError("intersection scan needs at least 1000 samples per contour");
    return scan(c1, c2, samples, false);
}

std::vector<Intersection> self_intersections(const Contour& c, int samples)
{
    if (samples < 1000)
        throw DomainError("intersection scan needs at least 1000 samples per contour");
    return scan(c, c, samples, true);
}

} // namespace ptspec

namespace ptspec {

namespace {

nlohmann::json point_json(cplx x) { return nlohmann::json::array({x.real(), x.imag()}); }

cplx json_point(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw InvalidConfig("complex points are encoded as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

nlohmann::json contour_to_json(const Contour& c, int samples)
{
    nlohmann::json params = std::visit(
        overloaded{
            [](const HyperbolicParams& h) { return nlohmann::json{{"a", h.a}, {"theta", h.theta}, {"over", h.over}}; },
            [](const RationalSqrtParams& r) { return nlohmann::json{{"c", r.c}, {"t", r.t}, {"theta", r.theta}}; },
            [](const SinusoidalParams& s) {
                return nlohmann::json{{"amplitude", s.amplitude}, {"periods", s.periods}};
            },
            [](const KnotParams& k) {
                return nlohmann::json{{"rotation", k.rotation}, {"depth", k.depth}, {"p_extent", k.p_extent}};
            },
            [](const LineParams&) { return nlohmann::json::object(); },
            [](const RealAxisParams&) { return nlohmann::json::object(); },
            [](const PolylineVParams& v) { return nlohmann::json{{"theta_right", v.theta_right}}; },
            [](const PolynomialParams& p) { return nlohmann::json{{"coeffs", p.coeffs}}; },
            [](const CrossCutParams& cc) { return nlohmann::json{{"height", cc.height}}; },
        },
        c.params());

    nlohmann::json j{{"kind", std::string(to_string(c.kind()))},
                     {"params", params},
                     {"interval", {c.p_min(), c.p_max()}},
                     {"anchors", {point_json(c.anchor_a()), point_json(c.anchor_b())}},
                     {"reversed", c.is_reversed()},
                     {"cut_crossing", c.cut_crossing()}};
    if (samples > 0) {
        nlohmann::json pts = nlohmann::json::array();
        for (cplx x : c.sample(samples))
            pts.push_back(point_json(x));
        j["samples"] = pts;
    }
    return j;
}

Contour contour_from_json(const nlohmann::json& j)
{
    try {
        const ContourKind kind = contour_kind_from_string(j.at("kind").get<std::string>());
        const auto& p = j.contains("params") ? j.at("params") : nlohmann::json::object();
        cplx a{}, b{};
        if (j.contains("anchors")) {
            a = json_point(j.at("anchors").at(0));
            b = json_point(j.at("anchors").at(1));
        }
        double extent = 0.0;
        if (j.contains("interval"))
            extent = j.at("interval").at(1).get<double>();

        Contour c = [&]() -> Contour {
            switch (kind) {
            case ContourKind::hyperbolic:
                return Contour::hyperbolic(p.at("a").get<double>(), p.at("theta").get<double>(), extent,
                                           p.value("over", false));
            case ContourKind::rational_sqrt:
                return Contour::rational_sqrt(p.at("c").get<double>(), p.at("t").get<double>(),
                                              p.at("theta").get<double>(), extent);
            case ContourKind::sinusoidal:
                return Contour::sinusoidal(a, b, p.at("amplitude").get<double>(), p.value("periods", 5.0));
            case ContourKind::knot:
                return Contour::knot(a, b, p.value("rotation", 0.0), p.at("depth").get<double>(),
                                     p.value("p_extent", 3.0));
            case ContourKind::line: return Contour::line(a, b);
            case ContourKind::real_axis: return Contour::real_axis(extent);
            case ContourKind::polyline_v: return Contour::polyline_v(extent, p.at("theta_right").get<double>());
            case ContourKind::polynomial:
                return Contour::polynomial(a, b, p.at("coeffs").get<std::vector<double>>());
            case ContourKind::cross_cut: return Contour::cross_cut(a, b, p.at("height").get<double>());
            }
            throw InvalidConfig("unknown contour kind");
        }();
        return j.value("reversed", false) ? c.reversed() : c;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("malformed contour description: ") + e.what());
    } catch (const DomainError& e) {
        throw InvalidConfig(std::string("invalid contour parameters: ") + e.what());
    }
}

} // namespace ptspec
