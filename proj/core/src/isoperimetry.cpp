#include "presist/isoperimetry.hpp"

#include "connected_sets.hpp"
#include "presist/bounds.hpp"
#include "presist/error.hpp"
#include "presist/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace presist {

using detail::Mask;

namespace {

struct MaskGraph {
    std::size_t n = 0;
    std::vector<Mask> adj;
    std::vector<std::vector<std::pair<unsigned, std::uint32_t>>> nbrs;
    std::vector<std::uint64_t> degree;

    explicit MaskGraph(const Graph &g) : n(g.size()), adj(n, 0), nbrs(n), degree(n) {
        for (VertexId v = 0; v < n; ++v) {
            degree[v] = g.degree(v);
            for (const auto &nb : g.neighbors(v)) {
                adj[v] |= Mask{1} << nb.id;
                nbrs[v].emplace_back(nb.id, nb.multiplicity);
            }
        }
    }

    std::size_t vertex_boundary(Mask s) const {
        Mask out = 0;
        for (Mask m = s; m; m &= m - 1) out |= adj[static_cast<unsigned>(std::countr_zero(m))];
        return static_cast<std::size_t>(std::popcount(out & ~s));
    }

    std::uint64_t edge_boundary(Mask s) const {
        std::uint64_t e = 0;
        for (Mask m = s; m; m &= m - 1)
            for (const auto &[y, mult] : nbrs[static_cast<unsigned>(std::countr_zero(m))])
                if (!((s >> y) & 1)) e += mult;
        return e;
    }
};

// Same-size sets: a precedes b when the least differing vertex belongs to a.
bool lex_less(Mask a, Mask b) {
    const Mask d = a ^ b;
    return d && (a & d & (0 - d));
}

std::vector<VertexId> to_list(Mask m) {
    std::vector<VertexId> out;
    for (; m; m &= m - 1) out.push_back(static_cast<VertexId>(std::countr_zero(m)));
    return out;
}

std::string hex_mask(const std::vector<VertexId> &set) {
    Mask m = 0;
    for (VertexId v : set) m |= Mask{1} << v;
    return fmt::format("0x{:x}", m);
}

struct Best {
    std::size_t vb = SIZE_MAX;
    std::uint64_t eb = UINT64_MAX;
    Mask vw = 0, ew = 0;
};

void offer(Best &b, Mask s, std::size_t vb, std::uint64_t eb) {
    if (vb < b.vb || (vb == b.vb && lex_less(s, b.vw))) {
        b.vb = vb;
        b.vw = s;
    }
    if (eb < b.eb || (eb == b.eb && lex_less(s, b.ew))) {
        b.eb = eb;
        b.ew = s;
    }
}

} // namespace

const ProfileEntry &IsoProfile::at(std::size_t size) const {
    if (size < lo || size > hi) throw Error(ErrorCode::OutOfProfileRange, fmt::format("size {} outside [{}, {}]", size, lo, hi));
    return by_size[size - lo];
}

IsoProfile exact_profile(const Graph &g, ProfileMode mode, std::size_t max_n) {
    if (max_n == 0) max_n = mode == ProfileMode::AllSets ? kAllSetsCap : kConnectedSetsCap;
    const std::size_t n = g.size();
    if (n > max_n || n > 63) throw Error(ErrorCode::SizeCapExceeded, fmt::format("exact profile on {} > {} vertices", n, max_n));
    if (n < 2) throw Error(ErrorCode::BadArguments, "exact profile needs at least two vertices");
    const MaskGraph mg(g);
    std::vector<Best> best(n);
    const Mask full = (Mask{1} << n) - 1;

    if (mode == ProfileMode::AllSets) {
        for (Mask s = 1; s < full; ++s)
            offer(best[static_cast<std::size_t>(std::popcount(s))], s, mg.vertex_boundary(s), mg.edge_boundary(s));
    } else {
        for (unsigned root = 0; root < n; ++root) {
            const Mask below = (Mask{1} << root) - 1;
            detail::for_each_connected_set(mg.adj, root, full, below, [&](Mask s) {
                if (s != full) offer(best[static_cast<std::size_t>(std::popcount(s))], s, mg.vertex_boundary(s), mg.edge_boundary(s));
            });
        }
    }

    IsoProfile prof;
    prof.mode = mode;
    prof.exhaustive = true;
    prof.lo = 1;
    prof.hi = n - 1;
    for (std::size_t k = 1; k < n; ++k)
        prof.by_size.push_back({k, best[k].vb, best[k].eb, to_list(best[k].vw), to_list(best[k].ew)});
    return prof;
}

std::string profile_csv(const IsoProfile &profile) {
    Table t{{"size", "min_vertex_boundary", "min_edge_boundary", "vertex_witness", "edge_witness"}, {}};
    for (const auto &e : profile.by_size)
        t.rows.push_back({std::to_string(e.size), std::to_string(e.min_vertex_boundary), std::to_string(e.min_edge_boundary),
                          hex_mask(e.vertex_witness), hex_mask(e.edge_witness)});
    return to_csv(t);
}

std::vector<BoundReport> verify_csc(const Graph &g, std::size_t max_n) {
    std::vector<BoundReport> out;
    if (g.size() < 2) return out;
    const auto prof = exact_profile(g, ProfileMode::AllSets, max_n);
    const auto growth = growth_profile(g, 0);
    for (std::size_t m = 1; m <= g.size() / 2; ++m)
        out.push_back(strict_report("min |dA| >= |A|/(12 phi(2|A|))", static_cast<double>(prof.at(m).min_vertex_boundary),
                                    csc_bound(growth, m), Side::Lower, {{"size", static_cast<double>(m)}}));
    return out;
}

BoundReport verify_cyclic_edge_iso(int n, int k, int max_n) {
    if (n > max_n || n > 63) throw Error(ErrorCode::SizeCapExceeded, fmt::format("n = {} exceeds {}", n, max_n));
    if (k < 1 || 2 * k >= n) throw Error(ErrorCode::BadArguments, "need 1 <= k < n/2");
    const MaskGraph mg(build_cayley_graph(GraphSpec::chords(n, k)));
    std::uint64_t best = UINT64_MAX;
    const Mask full = (Mask{1} << n) - 1;
    for (Mask s = 1; s < full; ++s) {
        const int c = std::popcount(s);
        if (c < k || c > n - k) continue;
        best = std::min(best, mg.edge_boundary(s));
    }
    return strict_report("min |d^E A| >= k^2/4 - 1", static_cast<double>(best), 0.25 * k * k - 1.0, Side::Lower,
                         {{"n", n}, {"k", k}});
}

namespace {

constexpr std::array kIsoNames{
    std::pair{IsoTheorem::T6_1, "T6_1"}, std::pair{IsoTheorem::T6_2, "T6_2"},
    std::pair{IsoTheorem::T6_3, "T6_3"}, std::pair{IsoTheorem::C6_x, "C6_x"},
    std::pair{IsoTheorem::L_iso_rel_lin, "L_iso_rel_lin"}, std::pair{IsoTheorem::P_iso_conv, "P_iso_conv"},
};

int hypothesis_radius(const BallGraph &ball, const IsoCheckOptions &opts) {
    const int r = opts.r > 0 ? opts.r : ball.radius - 1;
    if (r < 1 || r > ball.radius) throw Error(ErrorCode::RadiusTooSmall, fmt::format("hypothesis radius {} invalid for ball radius {}", r, ball.radius));
    return r;
}

std::int64_t signed_coord(const BallGraph &ball, VertexId v, std::size_t axis, const std::vector<std::int64_t> &moduli) {
    const auto x = ball.elements[v][axis];
    const auto m = moduli[axis];
    return (m > 0 && 2 * x >= m) ? x - m : x;
}

} // namespace

std::string_view to_string(IsoTheorem t) noexcept {
    for (const auto &[k, name] : kIsoNames)
        if (k == t) return name;
    return "?";
}

IsoTheorem iso_theorem_from_string(std::string_view s) {
    for (const auto &[k, name] : kIsoNames)
        if (s == name) return k;
    throw Error(ErrorCode::ParseError, fmt::format("unknown isoperimetric theorem '{}'", s));
}

std::vector<std::vector<VertexId>> iso_candidate_sets(const BallGraph &ball, const IsoCheckOptions &opts, bool *exhaustive) {
    const int r = hypothesis_radius(ball, opts);
    const auto growth = growth_profile(ball);
    const auto limit = static_cast<std::size_t>(growth.beta[static_cast<std::size_t>(r)] / 2);
    const auto interior = ball.ball(ball.radius - 1);
    std::set<std::vector<VertexId>> found;
    if (exhaustive) *exhaustive = false;
    if (limit == 0 || interior.empty()) return {};

    if (interior.size() <= std::min<std::size_t>(opts.exhaustive_cap, 63)) {
        // Interior vertices are 0..|interior|-1 by the (layer, element) numbering.
        std::vector<Mask> adj(interior.size(), 0);
        for (VertexId v : interior)
            for (const auto &nb : ball.base.neighbors(v))
                if (nb.id < interior.size()) adj[v] |= Mask{1} << nb.id;
        const Mask all = (Mask{1} << interior.size()) - 1;
        detail::for_each_connected_set(adj, ball.center, all, 0, [&](Mask s) {
            if (static_cast<std::size_t>(std::popcount(s)) <= limit) found.insert(to_list(s));
        });
        if (exhaustive) *exhaustive = true;
        return {found.begin(), found.end()};
    }

    for (int i = 0; i <= ball.radius - 1; ++i) {
        auto b = ball.ball(i);
        if (b.size() <= limit) found.insert(std::move(b));
    }

    const auto &moduli = ball.moduli;
    const std::size_t rank = moduli.size();
    for (std::size_t a = 0; a < rank; ++a) {
        std::int64_t lo_c = INT64_MAX, hi_c = INT64_MIN;
        for (VertexId v : interior) {
            const auto c = signed_coord(ball, v, a, moduli);
            lo_c = std::min(lo_c, c);
            hi_c = std::max(hi_c, c);
        }
        for (std::int64_t cut = lo_c; cut < hi_c; ++cut) {
            std::vector<VertexId> half;
            for (VertexId v : interior)
                if (signed_coord(ball, v, a, moduli) <= cut) half.push_back(v);
            if (!half.empty() && half.size() <= limit) found.insert(std::move(half));
        }
    }

    const std::size_t cap = std::min(limit, interior.size());
    std::uint64_t stream = 0;
    for (std::size_t decade = 1; decade <= cap; decade *= 10) {
        const std::size_t hi = std::min(cap, decade * 10 - 1);
        for (std::size_t t = 0; t < opts.random_sets_per_decade; ++t) {
            CounterRng rng(derive_seed(opts.seed, stream++));
            const std::size_t target = decade + rng.below(hi - decade + 1);
            std::vector<VertexId> set{ball.center};
            std::set<VertexId> in{ball.center};
            std::vector<VertexId> frontier;
            auto extend = [&](VertexId v) {
                for (const auto &nb : ball.base.neighbors(v))
                    if (nb.id < interior.size() && !in.count(nb.id)) frontier.push_back(nb.id);
            };
            extend(ball.center);
            while (set.size() < target && !frontier.empty()) {
                const auto idx = rng.below(frontier.size());
                const VertexId v = frontier[idx];
                frontier[idx] = frontier.back();
                frontier.pop_back();
                if (in.count(v)) continue;
                in.insert(v);
                set.push_back(v);
                extend(v);
            }
            std::sort(set.begin(), set.end());
            found.insert(std::move(set));
        }
    }
    return {found.begin(), found.end()};
}

std::vector<BoundReport> check_iso_theorems(const BallGraph &ball, IsoTheorem which, const IsoCheckOptions &opts) {
    const int r = hypothesis_radius(ball, opts);
    const auto growth = growth_profile(ball);
    const double br = static_cast<double>(growth.beta[static_cast<std::size_t>(r)]);
    const double b1 = static_cast<double>(growth.beta[1]);
    const double rr = r;
    std::vector<BoundReport> out;

    if (which == IsoTheorem::P_iso_conv) {
        auto holds = [&](double q) {
            for (int n = 1; n + 1 <= ball.radius; ++n) {
                const double bn = static_cast<double>(growth.beta[static_cast<std::size_t>(n)]);
                if (bn > br / 2.0) break;
                if (static_cast<double>(growth.sigma[static_cast<std::size_t>(n + 1)]) < std::pow(bn, (q - 1.0) / q)) return false;
            }
            return true;
        };
        double lo = 1.0, hi = 64.0;
        if (holds(hi)) lo = hi;
        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            (holds(mid) ? lo : hi) = mid;
        }
        auto rep = ratio_report("beta(r) >> r^q", br, std::pow(rr, lo), Side::Lower, {{"r", rr}, {"q", lo}});
        rep.note = "q is the largest exponent satisfying the boundary hypothesis";
        out.push_back(std::move(rep));
        return out;
    }

    const double q = std::log(br) / std::log(rr);
    const double qrel = std::log(br / b1) / std::log(rr);
    const double fq = std::floor(q), frac = q - fq;
    const double fqr = std::floor(qrel), fracr = qrel - fqr;

    bool exhaustive = false;
    const auto sets = iso_candidate_sets(ball, opts, &exhaustive);
    const std::string note = exhaustive ? "exhaustive connected sets" : "heuristic candidate sets";
    for (const auto &set : sets) {
        const auto bd = boundary(ball.base, set);
        const double a = static_cast<double>(set.size());
        const double vb = static_cast<double>(bd.vertex_boundary);
        Params base{{"r", rr}, {"size", a}};
        auto push = [&](BoundReport rep) {
            rep.note = note;
            out.push_back(std::move(rep));
        };
        switch (which) {
        case IsoTheorem::T6_1:
            if (q >= 1.0) {
                const double rhs = std::min(std::pow(a, fq / (fq + 1.0)), std::pow(rr, frac / fq) * std::pow(a, (fq - 1.0) / fq));
                base.emplace_back("q", q);
                push(ratio_report("|dA| >> min(|A|^(f/(f+1)), r^(frac(q)/f)|A|^((f-1)/f)), f = floor(q)", vb, rhs, Side::Lower, base));
            }
            break;
        case IsoTheorem::T6_2:
            if (qrel >= 1.0) {
                const double b = b_function(qrel);
                base.emplace_back("q", qrel);
                base.emplace_back("b", b);
                push(ratio_report("|dA| >> beta(1)^(1/b)|A|^((b-1)/b)", vb, std::pow(b1, 1.0 / b) * std::pow(a, (b - 1.0) / b),
                                  Side::Lower, base));
            }
            break;
        case IsoTheorem::T6_3:
            if (qrel >= 1.0 && qrel <= 3.0) {
                const double rhs = std::min(std::pow(b1, 1.0 / (fqr + 1.0)) * std::pow(a, fqr / (fqr + 1.0)),
                                            std::pow(b1, 1.0 / fqr) * std::pow(rr, fracr / fqr) * std::pow(a, (fqr - 1.0) / fqr));
                base.emplace_back("q", qrel);
                push(ratio_report("|dA| >> relative growth isoperimetry", vb, rhs, Side::Lower, base));
            }
            break;
        case IsoTheorem::C6_x:
            if (q >= 1.0) {
                const double rhs = std::min(std::pow(a, fq / (fq + 1.0)), std::pow(br, 1.0 / fq - 1.0 / q) * std::pow(a, 1.0 - 1.0 / fq));
                Params pq = base;
                pq.emplace_back("q", q);
                push(ratio_report("|dA| >> absolute-growth corollary", vb, rhs, Side::Lower, pq));
            }
            if (qrel >= 1.0 && qrel <= 3.0) {
                const double rhs = std::min(std::pow(b1, 1.0 / (fqr + 1.0)) * std::pow(a, fqr / (fqr + 1.0)),
                                            std::pow(b1, 1.0 / qrel) * std::pow(br, 1.0 / fqr - 1.0 / qrel) * std::pow(a, 1.0 - 1.0 / fqr));
                Params pq = base;
                pq.emplace_back("q", qrel);
                push(ratio_report("|dA| >> relative-growth corollary", vb, rhs, Side::Lower, pq));
            }
            break;
        case IsoTheorem::L_iso_rel_lin:
            push(strict_report("|dA| >= beta(1)/32", vb, b1 / 32.0, Side::Lower, base));
            break;
        case IsoTheorem::P_iso_conv:
            break;
        }
    }
    return out;
}

} // namespace presist
