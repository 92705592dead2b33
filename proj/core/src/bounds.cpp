#include "presist/bounds.hpp"

#include "connected_sets.hpp"
#include "presist/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <unordered_map>

namespace presist {

namespace {

std::pair<VertexId, VertexId> ordered(VertexId a, VertexId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

} // namespace

CutsetFamily make_cutset_family(const Graph &g, std::span<const VertexId> source, std::span<const VertexId> ground,
                                std::vector<std::vector<WeightedEdge>> cutsets) {
    if (source.empty() || ground.empty()) throw Error(ErrorCode::InvalidCutsets, "source and ground must be nonempty");
    std::set<std::pair<VertexId, VertexId>> used;
    CutsetFamily fam;
    std::vector<char> is_ground(g.size(), 0);
    for (VertexId v : ground) is_ground.at(v) = 1;

    for (std::size_t i = 0; i < cutsets.size(); ++i) {
        auto &cut = cutsets[i];
        std::set<std::pair<VertexId, VertexId>> removed;
        double size = 0.0;
        for (auto &e : cut) {
            if (e.u >= g.size() || e.v >= g.size() || g.multiplicity(e.u, e.v) == 0)
                throw Error(ErrorCode::InvalidCutsets, fmt::format("cutset {} contains a non-edge ({}, {})", i, e.u, e.v));
            const auto key = ordered(e.u, e.v);
            if (!used.insert(key).second)
                throw Error(ErrorCode::InvalidCutsets, fmt::format("edge ({}, {}) appears in more than one cutset", e.u, e.v));
            removed.insert(key);
            size += e.multiplicity;
        }
        std::vector<char> seen(g.size(), 0);
        std::vector<VertexId> stack;
        for (VertexId s : source) {
            if (!seen.at(s)) {
                seen[s] = 1;
                stack.push_back(s);
            }
        }
        while (!stack.empty()) {
            const VertexId x = stack.back();
            stack.pop_back();
            if (is_ground[x]) throw Error(ErrorCode::InvalidCutsets, fmt::format("cutset {} does not separate", i));
            for (const auto &nb : g.neighbors(x)) {
                if (seen[nb.id] || removed.count(ordered(x, nb.id))) continue;
                seen[nb.id] = 1;
                stack.push_back(nb.id);
            }
        }
        fam.sizes.push_back(size);
    }
    fam.cutsets = std::move(cutsets);
    return fam;
}

double nash_williams_bound(const CutsetFamily &family, double p) {
    if (!(p > 1.0)) throw Error(ErrorCode::DomainError, "Nash-Williams bound requires p > 1");
    double sum = 0.0;
    for (double s : family.sizes) sum += std::pow(s, -1.0 / (p - 1.0));
    return std::pow(sum, p - 1.0);
}

CutsetFamily sphere_cutsets(const BallGraph &ball, int r) {
    if (r < 1) throw Error(ErrorCode::BadArguments, "sphere cutsets need r >= 1");
    if (ball.radius < r) throw Error(ErrorCode::RadiusTooSmall, fmt::format("ball radius {} < {}", ball.radius, r));
    std::vector<std::vector<WeightedEdge>> cuts(static_cast<std::size_t>(r));
    for (VertexId u = 0; u < ball.size(); ++u) {
        const int l = ball.layer[u];
        if (l >= r) continue;
        for (const auto &nb : ball.base.neighbors(u))
            if (ball.layer[nb.id] == l + 1) cuts[static_cast<std::size_t>(l)].push_back({u, nb.id, nb.multiplicity});
    }
    const VertexId src[] = {ball.center};
    return make_cutset_family(ball.base, src, ball.sphere(r), std::move(cuts));
}

double csc_bound(const GrowthProfile &profile, std::uint64_t m) {
    if (m < 1) throw Error(ErrorCode::OutOfProfileRange, "csc bound needs m >= 1");
    const auto phi = profile.phi(2.0 * static_cast<double>(m));
    if (!phi) throw Error(ErrorCode::OutOfProfileRange, fmt::format("phi({}) beyond profile radius {}", 2 * m, profile.max_radius()));
    return static_cast<double>(m) / (12.0 * *phi);
}

double j_from_counts(double size, double vertex_boundary, double edge_boundary, double degree, double p) {
    if (vertex_boundary <= 0.0 || edge_boundary <= 0.0) throw Error(ErrorCode::EmptyBoundary, "set has empty boundary");
    const double a = p / (p - 1.0), b = 1.0 / (p - 1.0);
    const double vertex_term = size / std::pow(vertex_boundary, a) + std::pow(vertex_boundary, -b);
    const double edge_term = degree * size / std::pow(edge_boundary, a) + std::pow(edge_boundary, -b);
    return std::min(vertex_term, edge_term);
}

double j_quantity(const Graph &g, std::span<const VertexId> set, double p) {
    const auto bd = boundary(g, set);
    return j_from_counts(static_cast<double>(set.size()), static_cast<double>(bd.vertex_boundary),
                         static_cast<double>(bd.edge_boundary), static_cast<double>(g.max_degree()), p);
}

BoundaryLowerBound csc_boundary(const GrowthProfile &profile) {
    return [profile](std::uint64_t size) { return csc_bound(profile, size); };
}

namespace {

// Largest n >= lo with deg_u * 2^n <= total, or lo - 1 when none.
int top_scale(double total, double deg_u, int lo) {
    int n = lo - 1;
    while (deg_u * std::ldexp(1.0, n + 1) <= total) ++n;
    return n;
}

// Dyadic class of a set size: the n with total/2^{n+1} < s <= total/2^n.
int size_class(double total, double s) {
    int n = 0;
    while (s * std::ldexp(1.0, n + 1) <= total) ++n;
    return n;
}

// Max j per class n in [lo, hi] over connected sets containing u inside `domain`.
std::vector<double> exhaustive_terms(const Graph &g, std::span<const VertexId> domain, VertexId u, double p,
                                     double degree, double total, int lo, int hi, std::size_t cap) {
    if (domain.size() > cap || domain.size() > 64)
        throw Error(ErrorCode::SizeCapExceeded, fmt::format("exhaustive enumeration over {} > {} vertices", domain.size(), cap));
    std::unordered_map<VertexId, unsigned> local;
    for (unsigned i = 0; i < domain.size(); ++i) local.emplace(domain[i], i);
    const auto root = local.find(u);
    if (root == local.end()) throw Error(ErrorCode::BadArguments, "u is not in the domain");

    std::vector<detail::Mask> adj(domain.size(), 0);
    for (unsigned i = 0; i < domain.size(); ++i)
        for (const auto &nb : g.neighbors(domain[i]))
            if (auto it = local.find(nb.id); it != local.end()) adj[i] |= detail::Mask{1} << it->second;

    std::vector<double> best(static_cast<std::size_t>(std::max(0, hi - lo + 1)), 0.0);
    if (best.empty()) return best;
    std::vector<std::uint32_t> stamp(g.size(), 0);
    std::uint32_t epoch = 0;
    std::vector<VertexId> members;
    const detail::Mask all = domain.size() == 64 ? ~detail::Mask{0} : (detail::Mask{1} << domain.size()) - 1;

    detail::for_each_connected_set(adj, root->second, all, 0, [&](detail::Mask set) {
        const double s = std::popcount(set);
        const int cls = size_class(total, s);
        if (cls < lo || cls > hi) return;
        members.clear();
        for (detail::Mask m = set; m; m &= m - 1) members.push_back(domain[static_cast<unsigned>(std::countr_zero(m))]);
        ++epoch;
        for (VertexId a : members) stamp[a] = epoch;
        const std::uint32_t inside = epoch;
        ++epoch;
        std::uint64_t vb = 0, eb = 0;
        for (VertexId a : members)
            for (const auto &nb : g.neighbors(a)) {
                if (stamp[nb.id] == inside) continue;
                eb += nb.multiplicity;
                if (stamp[nb.id] != epoch) {
                    stamp[nb.id] = epoch;
                    ++vb;
                }
            }
        if (vb == 0) return;
        auto &slot = best[static_cast<std::size_t>(cls - lo)];
        slot = std::max(slot, j_from_counts(s, static_cast<double>(vb), static_cast<double>(eb), degree, p));
    });
    return best;
}

std::vector<double> profile_terms(const BoundaryLowerBound &min_boundary, double p, double total, int lo, int hi) {
    if (!min_boundary) throw Error(ErrorCode::ProfileUnavailable, "profile strategy needs a boundary lower bound");
    std::vector<double> best;
    for (int n = lo; n <= hi; ++n) {
        const auto s_lo = static_cast<std::uint64_t>(std::floor(total / std::ldexp(1.0, n + 1))) + 1;
        const auto s_hi = static_cast<std::uint64_t>(std::floor(total / std::ldexp(1.0, n)));
        double m = 0.0;
        for (std::uint64_t s = s_lo; s <= s_hi; ++s) {
            const double xi = std::max(1.0, std::ceil(min_boundary(s) - 1e-12));
            m = std::max(m, static_cast<double>(s) / std::pow(xi, p / (p - 1.0)) + std::pow(xi, -1.0 / (p - 1.0)));
        }
        best.push_back(m);
    }
    return best;
}

std::vector<double> scale_terms(const Graph &g, std::span<const VertexId> domain, VertexId u, double p, double total,
                                int lo, double degree, const BkOptions &opts) {
    const int hi = top_scale(total, static_cast<double>(g.degree(u)), lo);
    if (opts.strategy == BkStrategy::Exhaustive)
        return exhaustive_terms(g, domain, u, p, degree, total, lo, hi, opts.exhaustive_cap);
    return profile_terms(opts.min_boundary, p, total, lo, hi);
}

void check_p(double p) {
    if (!(p > 1.0)) throw Error(ErrorCode::DomainError, "p must exceed 1");
}

} // namespace

BkBound bk_upper_bound_ball(const Graph &g, std::span<const VertexId> ball, VertexId u, double p, const BkOptions &opts) {
    check_p(p);
    if (ball.size() >= g.size()) throw Error(ErrorCode::BadArguments, "B must be a proper subset");
    const double degree = opts.degree.value_or(static_cast<double>(g.max_degree()));
    BkBound out;
    out.scale_terms = scale_terms(g, ball, u, p, static_cast<double>(ball.size()), 0, degree, opts);
    out.root = std::pow(static_cast<double>(g.degree(u)), -1.0 / (p - 1.0));
    for (double t : out.scale_terms) out.root += t;
    out.value = std::pow(out.root, p - 1.0);
    return out;
}

BkBound bk_upper_bound_finite(const Graph &g, VertexId u, VertexId v, double p, const BkOptions &opts) {
    check_p(p);
    if (u == v || u >= g.size() || v >= g.size()) throw Error(ErrorCode::BadArguments, "need two distinct vertices");
    const double degree = opts.degree.value_or(static_cast<double>(g.max_degree()));
    std::vector<VertexId> all(g.size());
    for (VertexId i = 0; i < g.size(); ++i) all[i] = i;
    const double total = static_cast<double>(g.size());
    BkBound out;
    out.root = std::pow(static_cast<double>(g.degree(u)), -1.0 / (p - 1.0)) +
               std::pow(static_cast<double>(g.degree(v)), -1.0 / (p - 1.0));
    for (VertexId w : {u, v}) {
        const auto terms = scale_terms(g, all, w, p, total, 1, degree, opts);
        for (double t : terms) out.root += t;
        out.scale_terms.insert(out.scale_terms.end(), terms.begin(), terms.end());
    }
    out.value = std::pow(out.root, p - 1.0);
    return out;
}

double alpha_exponent(double p) {
    check_p(p);
    return p < 3.0 ? 1.0 : 1.0 - p / (std::floor(p) + 1.0);
}

double h_function(int d) {
    if (d < 0) throw Error(ErrorCode::DomainError, "h(d) needs d >= 0");
    return d < 1 ? 0.0 : 1.0 + 0.5 * d * (d - 1);
}

double h_star(double p) {
    if (!(p > 0.0)) throw Error(ErrorCode::DomainError, "h*(p) needs p > 0");
    return h_function(static_cast<int>(std::ceil(p)) - 1);
}

double b_function(double q) {
    if (!(q >= 0.0)) throw Error(ErrorCode::DomainError, "b(q) needs q >= 0");
    if (q <= 3.0 || q == 4.0) return q;
    int d = 1;
    while (h_function(d) <= q) ++d; // h(d) <= q means d+1 is admissible
    return d;
}

Exponents exponent_functions(double p, double q, int d) {
    return {alpha_exponent(p), h_function(d), h_star(p), b_function(q)};
}

namespace {

constexpr std::array kTheoremNames{
    std::pair{Theorem::T1_8_lower, "T1_8_lower"},
    std::pair{Theorem::T1_8_upper, "T1_8_upper"},
    std::pair{Theorem::T1_10_lower, "T1_10_lower"},
    std::pair{Theorem::T1_10_upper_int, "T1_10_upper_int"},
    std::pair{Theorem::T1_10_upper_nonint, "T1_10_upper_nonint"},
    std::pair{Theorem::T1_11, "T1_11"},
    std::pair{Theorem::T1_11_lower, "T1_11_lower"},
    std::pair{Theorem::T1_11_upper_nonint, "T1_11_upper_nonint"},
    std::pair{Theorem::T1_12, "T1_12"},
    std::pair{Theorem::T1_13, "T1_13"},
    std::pair{Theorem::T_var_converse, "T_var_converse"},
    std::pair{Theorem::P7_2_cases, "P7_2_cases"},
    std::pair{Theorem::P7_4_cases, "P7_4_cases"},
};

double need(const std::optional<double> &v, const char *name) {
    if (!v) throw Error(ErrorCode::MissingParam, fmt::format("missing parameter '{}'", name));
    return *v;
}

bool is_integer(double p) { return p == std::floor(p); }

// Minimum over the applicable cases of the upper-bound case analysis. `main` is the
// volume-scale term x^p / V, `logterm` is log(V / deg).
double case_minimum(double p, double q, double degree, double main, double logterm, std::optional<double> eps) {
    const double fp = std::floor(p);
    const double eta_term = std::pow(degree, -(1.0 - p / (fp + 1.0)));
    const double logpow = std::pow(std::max(0.0, logterm), p - 1.0);
    double best = std::numeric_limits<double>::infinity();
    if (q >= fp + 1.0) best = std::min(best, eta_term);
    if (q >= fp && q < fp + 1.0) {
        best = std::min(best, eta_term + main * logpow);
        if (!is_integer(p)) best = std::min(best, eta_term + main);
    }
    if (q <= p) best = std::min(best, 1.0 / degree + main * logpow);
    if (q < fp && !is_integer(p)) best = std::min(best, main);
    if (eps && q <= p - *eps) best = std::min(best, main);
    return best;
}

} // namespace

std::string_view to_string(Theorem t) noexcept {
    for (const auto &[k, name] : kTheoremNames)
        if (k == t) return name;
    return "?";
}

Theorem theorem_from_string(std::string_view s) {
    for (const auto &[k, name] : kTheoremNames)
        if (s == name) return k;
    throw Error(ErrorCode::ParseError, fmt::format("unknown theorem '{}'", s));
}

double theorem_rhs(Theorem t, const TheoremParams &pr) {
    switch (t) {
    case Theorem::T1_8_lower: {
        const double deg = need(pr.degree, "degree"), r = need(pr.r, "r"), b = need(pr.beta_r, "beta_r");
        return 1.0 / deg + r * r / (deg * b);
    }
    case Theorem::T1_8_upper: {
        const double deg = need(pr.degree, "degree"), r = need(pr.r, "r"), b = need(pr.beta_r, "beta_r");
        return 1.0 / deg + r * r * std::log(r) / b;
    }
    case Theorem::T1_10_lower: {
        const double deg = need(pr.degree, "degree"), r = need(pr.r, "r"), b = need(pr.beta_r, "beta_r"),
                     p = need(pr.p, "p");
        return 1.0 / deg + std::pow(r, p) / (deg * b);
    }
    case Theorem::T1_10_upper_int: {
        const double deg = need(pr.degree, "degree"), r = need(pr.r, "r"), b = need(pr.beta_r, "beta_r"),
                     p = need(pr.p, "p");
        return std::pow(deg, -alpha_exponent(p)) + std::pow(r, p) * std::pow(std::log(r), p - 1.0) / b;
    }
    case Theorem::T1_10_upper_nonint: {
        const double deg = need(pr.degree, "degree"), r = need(pr.r, "r"), b = need(pr.beta_r, "beta_r"),
                     p = need(pr.p, "p");
        return std::pow(deg, -alpha_exponent(p)) + std::pow(r, p) / b;
    }
    case Theorem::T1_11: {
        const double deg = need(pr.degree, "degree"), d = need(pr.diameter, "diameter"), n = need(pr.order, "order"),
                     p = need(pr.p, "p");
        return std::pow(deg, -alpha_exponent(p)) + std::pow(d, p) * std::pow(std::log(n), p - 1.0) / n;
    }
    case Theorem::T1_11_lower: {
        const double deg = need(pr.degree, "degree"), d = need(pr.diameter, "diameter"), n = need(pr.order, "order"),
                     p = need(pr.p, "p");
        return 1.0 / deg + std::pow(d, p) / (deg * n);
    }
    case Theorem::T1_11_upper_nonint: {
        const double deg = need(pr.degree, "degree"), d = need(pr.diameter, "diameter"), n = need(pr.order, "order"),
                     p = need(pr.p, "p");
        return std::pow(deg, -alpha_exponent(p)) + std::pow(d, p) / n;
    }
    case Theorem::T1_12: {
        const double r = need(pr.r, "r"), b = need(pr.beta_r, "beta_r"), p = need(pr.p, "p");
        return std::pow(r, p) / b;
    }
    case Theorem::T1_13: {
        const double d = need(pr.diameter, "diameter"), n = need(pr.order, "order"), p = need(pr.p, "p");
        return std::pow(d, p) / n;
    }
    case Theorem::T_var_converse: {
        const double deg = need(pr.degree, "degree"), n = need(pr.n, "n"), r = need(pr.r, "r"),
                     b = need(pr.beta_n, "beta_n");
        return n * n / (deg * b) * std::log(r / n);
    }
    case Theorem::P7_2_cases: {
        const double deg = need(pr.degree, "degree"), d = need(pr.diameter, "diameter"), n = need(pr.order, "order"),
                     p = need(pr.p, "p");
        const double q = pr.q ? *pr.q : std::log(n) / std::log(d);
        return case_minimum(p, q, deg, std::pow(d, p) / n, std::log(n / deg), pr.eps);
    }
    case Theorem::P7_4_cases: {
        const double deg = need(pr.degree, "degree"), r = need(pr.r, "r"), b = need(pr.beta_r, "beta_r"),
                     p = need(pr.p, "p");
        const double q = pr.q ? *pr.q : std::log(need(pr.beta_4r, "beta_4r")) / std::log(4.0 * r);
        return case_minimum(p, q, deg, std::pow(r, p) / b, std::log(b / deg), pr.eps);
    }
    }
    throw Error(ErrorCode::BadArguments, "unknown theorem");
}

double diameter_lower_bound(double p, double diameter, double edges, double degree_u) {
    check_p(p);
    const double e = 1.0 / (p - 1.0);
    const double tail = diameter > 1.0 ? std::pow(std::pow(diameter - 1.0, p) / (4.0 * (edges - degree_u)), e) : 0.0;
    return std::pow(std::pow(1.0 / degree_u, e) + tail, p - 1.0);
}

double diameter_lower_bound_transitive(double p, double diameter, double degree, double order) {
    check_p(p);
    const double e = 1.0 / (p - 1.0);
    const double tail = diameter > 1.0 ? std::pow(std::pow(diameter - 1.0, p) / (2.0 * degree * (order - 2.0)), e) : 0.0;
    return std::pow(std::pow(1.0 / degree, e) + tail, p - 1.0);
}

double sharpness_lower_bound(int n, int d, int k, double p) {
    check_p(p);
    if (n < 2 || n % 2 || d < 1 || k < 1) throw Error(ErrorCode::BadArguments, "need even n >= 2, d >= 1, k >= 1");
    double sum = 0.0;
    for (int i = 1; i <= n / 2; ++i) sum += std::pow(static_cast<double>(i), (1.0 - d) / (p - 1.0));
    return std::pow(sum, p - 1.0) / k;
}

bool power_distance_holds(double a, double b, double p) {
    const double m = std::pow(std::max(a, b), p), s = std::pow(a + b, p);
    const double slack = 1e-12 * std::max(1.0, s);
    return m <= s + slack && s <= std::pow(2.0, p) * m + slack;
}

std::optional<BoundReport> check_four_r(const GrowthProfile &profile, int r) {
    if (r < 1 || profile.max_radius() < 4 * r) return std::nullopt;
    if (profile.diameter && *profile.diameter < 4 * r) return std::nullopt;
    const auto br = static_cast<double>(profile.beta[static_cast<std::size_t>(r)]);
    const auto b4 = static_cast<double>(profile.beta[static_cast<std::size_t>(4 * r)]);
    return strict_report("beta(r) <= beta(4r)/2", br, b4 / 2.0, Side::Upper, {{"r", r}});
}

std::optional<BoundReport> check_second_term_only(const Graph &g, std::span<const VertexId> set, double p, double c) {
    const auto bd = boundary(g, set);
    const double xi = static_cast<double>(bd.vertex_boundary);
    const double size = static_cast<double>(set.size());
    if (xi > c * size) return std::nullopt;
    const double j = j_from_counts(size, xi, static_cast<double>(bd.edge_boundary), static_cast<double>(g.max_degree()), p);
    return strict_report("j_{A,p} <= (1+C)|A|/xi^{p/(p-1)}", j, (1.0 + c) * size / std::pow(xi, p / (p - 1.0)),
                         Side::Upper, {{"p", p}, {"size", size}, {"xi", xi}, {"C", c}});
}

std::vector<BoundReport> check_growth_bounds(const GrowthProfile &profile, int r) {
    std::vector<BoundReport> out;
    const int top = std::min(r, profile.max_radius());
    const double k = static_cast<double>(profile.degree);
    const int rad = profile.diameter.value_or(top);
    for (int n = 1; n <= std::min(top, rad); ++n)
        out.push_back(strict_report("beta(n) >= (deg+1)n/3", static_cast<double>(profile.beta[static_cast<std::size_t>(n)]),
                                    (k + 1.0) * n / 3.0, Side::Lower, {{"n", n}}));
    if (top < 2) return out;

    const double br = static_cast<double>(profile.beta[static_cast<std::size_t>(top)]);
    const double b1 = static_cast<double>(profile.beta[1]);
    const double q = std::log(br) / std::log(static_cast<double>(top));
    if (q >= 1.0) {
        const double fq = std::floor(q), frac = q - fq;
        const double knee = std::pow(static_cast<double>(top), frac);
        for (int n = 1; n <= top; ++n) {
            const double bn = static_cast<double>(profile.beta[static_cast<std::size_t>(n)]);
            const double rhs = n <= knee ? std::pow(n, fq + 1.0) : knee * std::pow(n, fq);
            out.push_back(ratio_report("beta(n) >> growth lower bound", bn, rhs, Side::Lower, {{"n", n}, {"q", q}}));
        }
    }
    const double qrel = std::log(br / b1) / std::log(static_cast<double>(top));
    if (qrel >= 1.0) {
        const double b = b_function(qrel);
        for (int n = 1; n < top; ++n) {
            const double bn = static_cast<double>(profile.beta[static_cast<std::size_t>(n)]);
            out.push_back(ratio_report("beta(n) >> n^b beta(1)", bn, std::pow(n, b) * b1, Side::Lower,
                                       {{"n", n}, {"q", qrel}, {"b", b}}));
        }
    }
    return out;
}

} // namespace presist
