#include "presist/graph.hpp"

#include "presist/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

namespace presist {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DisconnectedGeneratingSet: return "DisconnectedGeneratingSet";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::InfiniteFactorPresent: return "InfiniteFactorPresent";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::FullSet: return "FullSet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DisconnectedTerminals: return "DisconnectedTerminals";
    case ErrorCode::BadArguments: return "BadArguments";
    case ErrorCode::InvalidCutsets: return "InvalidCutsets";
    case ErrorCode::OutOfProfileRange: return "OutOfProfileRange";
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::ProfileUnavailable: return "ProfileUnavailable";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::MissingParam: return "MissingParam";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// GraphSpec

bool GraphSpec::has_infinite_factor() const noexcept {
    return std::any_of(factors.begin(), factors.end(), [](const Factor &f) { return f.infinite(); });
}

GraphSpec GraphSpec::cycle(std::int64_t n, int radius) {
    return {Family::TorusProduct, {Factor::cyclic(n)}, {GeneratorTerm::box()}, radius};
}

GraphSpec GraphSpec::line(int radius) {
    return {Family::TorusProduct, {Factor::integers()}, {GeneratorTerm::box()}, radius};
}

GraphSpec GraphSpec::lattice(int d, int radius) {
    GraphSpec s{Family::TorusProduct, {}, {GeneratorTerm::box()}, radius};
    s.factors.assign(static_cast<std::size_t>(d), Factor::integers());
    return s;
}

GraphSpec GraphSpec::torus(std::int64_t n, int d, int radius) {
    GraphSpec s{Family::TorusProduct, {}, {GeneratorTerm::box()}, radius};
    s.factors.assign(static_cast<std::size_t>(d), Factor::cyclic(n));
    return s;
}

GraphSpec GraphSpec::chords(std::int64_t n, std::int64_t k, int radius) {
    return {Family::CyclicChords, {Factor::cyclic(n)}, {GeneratorTerm::chords(k)}, radius};
}

GraphSpec GraphSpec::torus_with_fiber(std::int64_t n, int d, std::int64_t k, int radius) {
    GraphSpec s = torus(n, d, radius);
    if (k > 1) {
        s.factors.push_back(Factor::cyclic(k));
        s.generators.push_back(GeneratorTerm::full(d));
    }
    return s;
}

GraphSpec GraphSpec::line_times_torus(std::int64_t m, int d, int radius) {
    GraphSpec s{Family::ZTimesTorus, {Factor::integers()}, {GeneratorTerm::box()}, radius};
    for (int i = 0; i < d; ++i)
        s.factors.push_back(Factor::cyclic(m));
    return s;
}

std::string_view to_string(Family f) noexcept {
    switch (f) {
    case Family::TorusProduct: return "torus_product";
    case Family::CyclicChords: return "cyclic_chords";
    case Family::ZTimesTorus: return "z_times_torus";
    case Family::Explicit: return "explicit";
    }
    return "torus_product";
}

Family family_from_string(std::string_view s) {
    if (s == "torus_product") return Family::TorusProduct;
    if (s == "cyclic_chords") return Family::CyclicChords;
    if (s == "z_times_torus") return Family::ZTimesTorus;
    if (s == "explicit") return Family::Explicit;
    throw Error(ErrorCode::ParseError, "unknown family '" + std::string(s) + "'");
}

namespace {

std::int64_t reduce(std::int64_t x, std::int64_t m) {
    if (m == 0) return x;
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

void validate_factors(const GraphSpec &spec) {
    if (spec.factors.empty()) throw Error(ErrorCode::InvalidSpec, "no factors");
    for (const auto &f : spec.factors)
        if (!f.infinite() && f.modulus < 2) throw Error(ErrorCode::InvalidSpec, "finite modulus must be >= 2");
    if (spec.radius < 0) throw Error(ErrorCode::InvalidSpec, "negative radius");
}

void add_box(const GraphSpec &spec, const std::vector<bool> &boxed, const Element &base,
             std::vector<Element> &out) {
    const std::size_t d = spec.rank();
    Element e = base;
    // Odometer over {-1,0,1} on the boxed coordinates.
    std::vector<int> digit(d, -1);
    for (std::size_t i = 0; i < d; ++i)
        if (!boxed[i]) digit[i] = 0;
    while (true) {
        for (std::size_t i = 0; i < d; ++i)
            if (boxed[i]) e[i] = base[i] + digit[i];
        out.push_back(e);
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (!boxed[i]) continue;
            if (digit[i] < 1) {
                ++digit[i];
                break;
            }
            digit[i] = -1;
        }
        if (i == d) break;
    }
}

} // namespace

Element canonical(const GraphSpec &spec, Element e) {
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = reduce(e[i], spec.factors[i].modulus);
    return e;
}

std::vector<Element> expand_generators(const GraphSpec &spec) {
    validate_factors(spec);
    const std::size_t d = spec.rank();
    if (spec.generators.empty()) throw Error(ErrorCode::InvalidSpec, "empty generating set");

    std::vector<bool> claimed(d, false);
    for (const auto &g : spec.generators) {
        if (g.kind == GeneratorTerm::Kind::Full || g.kind == GeneratorTerm::Kind::BoxFull) {
            if (g.index < 0 || static_cast<std::size_t>(g.index) >= d)
                throw Error(ErrorCode::InvalidSpec, "generator factor index out of range");
            if (spec.factors[static_cast<std::size_t>(g.index)].infinite())
                throw Error(ErrorCode::InvalidSpec, "full factor generator on an infinite factor");
            claimed[static_cast<std::size_t>(g.index)] = true;
        }
    }

    std::vector<Element> raw;
    const Element zero(d, 0);
    for (const auto &g : spec.generators) {
        switch (g.kind) {
        case GeneratorTerm::Kind::Box: {
            std::vector<bool> boxed(d);
            for (std::size_t i = 0; i < d; ++i) boxed[i] = !claimed[i];
            add_box(spec, boxed, zero, raw);
            break;
        }
        case GeneratorTerm::Kind::Full: {
            const auto i = static_cast<std::size_t>(g.index);
            for (std::int64_t a = 0; a < spec.factors[i].modulus; ++a) {
                Element e = zero;
                e[i] = a;
                raw.push_back(e);
            }
            break;
        }
        case GeneratorTerm::Kind::BoxFull: {
            const auto i = static_cast<std::size_t>(g.index);
            std::vector<bool> boxed(d, true);
            boxed[i] = false;
            for (std::int64_t a = 0; a < spec.factors[i].modulus; ++a) {
                Element base = zero;
                base[i] = a;
                add_box(spec, boxed, base, raw);
            }
            break;
        }
        case GeneratorTerm::Kind::Chords: {
            if (g.k < 1) throw Error(ErrorCode::InvalidSpec, "chords(k) needs k >= 1");
            for (std::int64_t a = -g.k; a <= g.k; ++a) {
                Element e = zero;
                e[0] = a;
                raw.push_back(e);
            }
            break;
        }
        case GeneratorTerm::Kind::Offset: {
            if (g.offset.size() != d) throw Error(ErrorCode::InvalidSpec, "offset has wrong rank");
            raw.push_back(g.offset);
            break;
        }
        }
    }

    std::vector<Element> gens;
    gens.reserve(raw.size());
    for (auto &e : raw) {
        Element c = canonical(spec, std::move(e));
        if (c != zero) gens.push_back(std::move(c));
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

    for (const auto &g : gens) {
        Element neg(d);
        for (std::size_t i = 0; i < d; ++i) neg[i] = -g[i];
        neg = canonical(spec, std::move(neg));
        if (!std::binary_search(gens.begin(), gens.end(), neg))
            throw Error(ErrorCode::InvalidSpec, "generating set is not symmetric");
    }
    if (gens.empty()) throw Error(ErrorCode::InvalidSpec, "generating set has only the identity");
    return gens;
}

// ---------------------------------------------------------------------------
// Graph

Graph Graph::from_edges(std::size_t n, std::span<const WeightedEdge> edges) {
    std::vector<std::map<VertexId, std::uint32_t>> adj(n);
    for (const auto &e : edges) {
        if (e.u >= n || e.v >= n) throw Error(ErrorCode::BadArguments, "edge endpoint out of range");
        if (e.u == e.v || e.multiplicity == 0) continue;
        adj[e.u][e.v] += e.multiplicity;
        adj[e.v][e.u] += e.multiplicity;
    }
    Graph g;
    g.offsets_.assign(n + 1, 0);
    g.degree_.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        g.offsets_[v + 1] = g.offsets_[v] + adj[v].size();
        for (const auto &[w, m] : adj[v]) {
            g.neighbors_.push_back({w, m});
            g.degree_[v] += m;
        }
        g.max_degree_ = std::max(g.max_degree_, g.degree_[v]);
    }
    g.edge_count_ = std::accumulate(g.degree_.begin(), g.degree_.end(), std::uint64_t{0}) / 2;
    if (n > 0) {
        const auto dist = bfs_distances(g, 0);
        if (std::any_of(dist.begin(), dist.end(), [](int x) { return x < 0; }))
            throw Error(ErrorCode::Disconnected, "graph is not connected");
    }
    return g;
}

std::uint32_t Graph::multiplicity(VertexId u, VertexId v) const noexcept {
    const auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const Neighbor &a, VertexId x) { return a.id < x; });
    return (it != nb.end() && it->id == v) ? it->multiplicity : 0;
}

std::vector<WeightedEdge> Graph::edges() const {
    std::vector<WeightedEdge> out;
    for (VertexId u = 0; u < size(); ++u)
        for (const auto &nb : neighbors(u))
            if (u < nb.id) out.push_back({u, nb.id, nb.multiplicity});
    return out;
}

bool Graph::operator==(const Graph &o) const {
    if (offsets_ != o.offsets_ || degree_ != o.degree_) return false;
    for (std::size_t i = 0; i < neighbors_.size(); ++i)
        if (neighbors_[i].id != o.neighbors_[i].id || neighbors_[i].multiplicity != o.neighbors_[i].multiplicity)
            return false;
    return true;
}

std::vector<int> bfs_distances(const Graph &g, VertexId source) {
    std::vector<int> dist(g.size(), -1);
    if (g.size() == 0) return dist;
    std::deque<VertexId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        for (const auto &nb : g.neighbors(v)) {
            if (dist[nb.id] < 0) {
                dist[nb.id] = dist[v] + 1;
                queue.push_back(nb.id);
            }
        }
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Cayley graphs and balls

namespace {

struct ElementHash {
    std::size_t operator()(const Element &e) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto x : e) {
            h ^= static_cast<std::uint64_t>(x);
            h *= 1099511628211ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

Element add(const GraphSpec &spec, const Element &a, const Element &b) {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = reduce(a[i] + b[i], spec.factors[i].modulus);
    return c;
}

} // namespace

std::vector<Element> cayley_vertex_elements(const GraphSpec &spec) {
    validate_factors(spec);
    if (spec.has_infinite_factor())
        throw Error(ErrorCode::InfiniteFactorPresent, "cannot enumerate an infinite group");
    std::vector<Element> out;
    Element e(spec.rank(), 0);
    while (true) {
        out.push_back(e);
        // Lexicographic odometer: last coordinate varies fastest.
        std::size_t i = spec.rank();
        while (i > 0) {
            --i;
            if (++e[i] < spec.factors[i].modulus) break;
            e[i] = 0;
            if (i == 0) return out;
        }
        if (spec.rank() == 0) return out;
    }
}

Graph build_cayley_graph(const GraphSpec &spec, const BuildOptions &opts) {
    validate_factors(spec);
    if (spec.has_infinite_factor())
        throw Error(ErrorCode::InfiniteFactorPresent, "build_cayley_graph needs all factors finite");
    double total = 1.0;
    for (const auto &f : spec.factors) total *= static_cast<double>(f.modulus);
    if (total > static_cast<double>(opts.size_cap))
        throw Error(ErrorCode::SizeCapExceeded, "group order exceeds the size cap");

    const auto gens = expand_generators(spec);
    const auto n = static_cast<std::size_t>(total);
    const std::size_t d = spec.rank();

    auto rank_of = [&](const Element &e) {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < d; ++i) r = r * static_cast<std::uint64_t>(spec.factors[i].modulus) + static_cast<std::uint64_t>(e[i]);
        return static_cast<VertexId>(r);
    };

    const auto elements = cayley_vertex_elements(spec);
    std::vector<WeightedEdge> edges;
    edges.reserve(n * gens.size() / 2);
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto &s : gens) {
            const VertexId w = rank_of(add(spec, elements[v], s));
            if (v < w) edges.push_back({static_cast<VertexId>(v), w, 1});
        }
    }
    try {
        return Graph::from_edges(n, edges);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::Disconnected)
            throw Error(ErrorCode::DisconnectedGeneratingSet, "generators do not generate the group");
        throw;
    }
}

BallGraph build_ball(const GraphSpec &spec, int radius, const BuildOptions &opts) {
    if (radius < 0) throw Error(ErrorCode::BadArguments, "negative radius");
    const auto gens = expand_generators(spec);
    const std::size_t d = spec.rank();

    std::unordered_map<Element, VertexId, ElementHash> index;
    std::vector<Element> elements{Element(d, 0)};
    std::vector<int> layer{0};
    index.emplace(elements[0], 0);

    std::vector<VertexId> frontier{0};
    for (int r = 1; r <= radius && !frontier.empty(); ++r) {
        std::vector<Element> next;
        for (VertexId v : frontier) {
            for (const auto &s : gens) {
                Element w = add(spec, elements[v], s);
                if (!index.contains(w)) next.push_back(std::move(w));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (elements.size() + next.size() > opts.size_cap)
            throw Error(ErrorCode::SizeCapExceeded, "ball exceeds the size cap");
        frontier.clear();
        for (auto &e : next) {
            const auto id = static_cast<VertexId>(elements.size());
            index.emplace(e, id);
            elements.push_back(std::move(e));
            layer.push_back(r);
            frontier.push_back(id);
        }
    }

    const std::size_t n = elements.size();
    std::vector<WeightedEdge> edges;
    std::vector<std::uint32_t> exit_degree(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto &s : gens) {
            const auto it = index.find(add(spec, elements[v], s));
            if (it == index.end()) {
                ++exit_degree[v];
            } else if (v < it->second) {
                edges.push_back({static_cast<VertexId>(v), it->second, 1});
            }
        }
    }

    BallGraph ball;
    ball.base = Graph::from_edges(n, edges);
    ball.center = 0;
    ball.radius = radius;
    ball.layer = std::move(layer);
    ball.exit_degree = std::move(exit_degree);
    ball.elements = std::move(elements);
    ball.ambient_degree = gens.size();
    for (const auto &f : spec.factors) ball.moduli.push_back(f.modulus);
    return ball;
}

bool BallGraph::covers_ambient() const noexcept {
    return std::all_of(exit_degree.begin(), exit_degree.end(), [](auto x) { return x == 0; });
}

std::vector<VertexId> BallGraph::sphere(int r) const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < size(); ++v)
        if (layer[v] == r) out.push_back(v);
    return out;
}

std::vector<VertexId> BallGraph::ball(int r) const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < size(); ++v)
        if (layer[v] <= r) out.push_back(v);
    return out;
}

std::optional<VertexId> BallGraph::find(const Element &e) const {
    // Vertices are sorted by (layer, element) so a linear scan per layer is enough here.
    for (VertexId v = 0; v < size(); ++v)
        if (elements[v] == e) return v;
    return std::nullopt;
}

std::optional<int> GrowthProfile::phi(double xi) const noexcept {
    for (std::size_t r = 1; r < beta.size(); ++r)
        if (static_cast<double>(beta[r]) >= xi) return static_cast<int>(r);
    return std::nullopt;
}

GrowthProfile growth_profile(const BallGraph &ball) {
    GrowthProfile prof;
    prof.sigma.assign(static_cast<std::size_t>(ball.radius) + 1, 0);
    for (int l : ball.layer) ++prof.sigma[static_cast<std::size_t>(l)];
    prof.beta.resize(prof.sigma.size());
    std::partial_sum(prof.sigma.begin(), prof.sigma.end(), prof.beta.begin());
    prof.degree = prof.beta.size() > 1 ? prof.beta[1] - 1 : ball.ambient_degree;
    if (ball.covers_ambient())
        prof.diameter = *std::max_element(ball.layer.begin(), ball.layer.end());
    return prof;
}

GrowthProfile growth_profile(const Graph &g, VertexId center) {
    const auto dist = bfs_distances(g, center);
    const int ecc = *std::max_element(dist.begin(), dist.end());
    GrowthProfile prof;
    prof.sigma.assign(static_cast<std::size_t>(ecc) + 1, 0);
    for (int x : dist) ++prof.sigma[static_cast<std::size_t>(x)];
    prof.beta.resize(prof.sigma.size());
    std::partial_sum(prof.sigma.begin(), prof.sigma.end(), prof.beta.begin());
    prof.degree = g.degree(center);
    prof.diameter = ecc;
    return prof;
}

Boundary boundary(const Graph &g, std::span<const VertexId> set) {
    if (set.empty()) throw Error(ErrorCode::EmptySet, "boundary of the empty set");
    std::vector<char> in(g.size(), 0);
    std::size_t count = 0;
    for (VertexId v : set) {
        if (v >= g.size()) throw Error(ErrorCode::BadArguments, "vertex out of range");
        if (!in[v]) ++count;
        in[v] = 1;
    }
    if (count == g.size()) throw Error(ErrorCode::FullSet, "boundary of the full vertex set");

    Boundary b;
    std::vector<char> seen(g.size(), 0);
    for (VertexId v = 0; v < g.size(); ++v) {
        if (!in[v]) continue;
        for (const auto &nb : g.neighbors(v)) {
            if (in[nb.id]) continue;
            b.edge_boundary += nb.multiplicity;
            if (!seen[nb.id]) {
                seen[nb.id] = 1;
                b.boundary_vertices.push_back(nb.id);
            }
        }
    }
    std::sort(b.boundary_vertices.begin(), b.boundary_vertices.end());
    b.vertex_boundary = b.boundary_vertices.size();
    return b;
}

// ---------------------------------------------------------------------------
// Terminal problems

TerminalProblem collapse_terminals(const Graph &g, std::span<const VertexId> source,
                                   std::span<const VertexId> ground) {
    if (source.empty() || ground.empty())
        throw Error(ErrorCode::BadArguments, "source and ground must be nonempty");
    enum : char { Free = 0, Src = 1, Gnd = 2 };
    std::vector<char> role(g.size(), Free);
    for (VertexId v : source) role.at(v) = Src;
    for (VertexId v : ground) {
        if (role.at(v) == Src) throw Error(ErrorCode::BadArguments, "source and ground overlap");
        role[v] = Gnd;
    }

    // Label free components and record which terminals each touches.
    std::vector<int> comp(g.size(), -1);
    std::vector<char> touches;
    int ncomp = 0;
    for (VertexId s = 0; s < g.size(); ++s) {
        if (role[s] != Free || comp[s] >= 0) continue;
        char t = 0;
        std::deque<VertexId> q{s};
        comp[s] = ncomp;
        while (!q.empty()) {
            const VertexId v = q.front();
            q.pop_front();
            for (const auto &nb : g.neighbors(v)) {
                if (role[nb.id] != Free) {
                    t |= role[nb.id];
                } else if (comp[nb.id] < 0) {
                    comp[nb.id] = ncomp;
                    q.push_back(nb.id);
                }
            }
        }
        touches.push_back(t);
        ++ncomp;
    }

    bool direct = false;
    for (VertexId v = 0; v < g.size() && !direct; ++v)
        if (role[v] == Src)
            for (const auto &nb : g.neighbors(v))
                if (role[nb.id] == Gnd) direct = true;
    const bool any_bridge = std::any_of(touches.begin(), touches.end(), [](char t) { return t == (Src | Gnd); });
    if (!direct && !any_bridge) throw Error(ErrorCode::DisconnectedTerminals, "source cannot reach ground");

    TerminalProblem prob;
    std::vector<VertexId> new_id(g.size(), 0);
    for (VertexId v = 0; v < g.size(); ++v) {
        if (role[v] == Free && touches[static_cast<std::size_t>(comp[v])] == (Src | Gnd)) {
            prob.free_original.push_back(v);
            new_id[v] = static_cast<VertexId>(prob.free_original.size());
        }
    }
    const auto ground_id = static_cast<VertexId>(prob.free_original.size() + 1);
    constexpr VertexId kDropped = static_cast<VertexId>(-1);
    for (VertexId v = 0; v < g.size(); ++v) {
        if (role[v] == Src) new_id[v] = 0;
        else if (role[v] == Gnd) new_id[v] = ground_id;
        else if (touches[static_cast<std::size_t>(comp[v])] != (Src | Gnd)) new_id[v] = kDropped;
    }

    std::vector<WeightedEdge> edges;
    for (VertexId u = 0; u < g.size(); ++u) {
        for (const auto &nb : g.neighbors(u)) {
            if (u >= nb.id) continue;
            const VertexId a = new_id[u], b = new_id[nb.id];
            if (a == kDropped || b == kDropped || a == b) continue;
            edges.push_back({a, b, nb.multiplicity});
        }
    }
    prob.graph = Graph::from_edges(prob.free_original.size() + 2, edges);
    prob.source = 0;
    prob.ground = ground_id;
    return prob;
}

TerminalProblem dirichlet_problem(const BallGraph &ball, int r, DirichletMode mode) {
    if (r < 0 || ball.radius < r + 1)
        throw Error(ErrorCode::RadiusTooSmall, "ball radius must be at least r+1");
    const std::vector<VertexId> source{ball.center};
    std::vector<VertexId> ground;
    for (VertexId v = 0; v < ball.size(); ++v) {
        const bool in_ground = mode == DirichletMode::Sphere ? ball.layer[v] == r + 1 : ball.layer[v] > r;
        if (in_ground) ground.push_back(v);
    }
    if (ground.empty()) throw Error(ErrorCode::RadiusTooSmall, "sphere S(x, r+1) is empty");
    return collapse_terminals(ball.base, source, ground);
}

TerminalProblem sphere_to_sphere_problem(const BallGraph &ball, int inner, int outer) {
    if (inner < 0 || outer <= inner || ball.radius < outer)
        throw Error(ErrorCode::RadiusTooSmall, "need 0 <= inner < outer <= ball radius");
    const auto src = ball.sphere(inner);
    const auto gnd = ball.sphere(outer);
    if (src.empty() || gnd.empty()) throw Error(ErrorCode::RadiusTooSmall, "empty sphere");
    return collapse_terminals(ball.base, src, gnd);
}

bool isomorphic_by_identity(const TerminalProblem &a, const TerminalProblem &b) {
    return a.source == b.source && a.ground == b.ground && a.free_original == b.free_original && a.graph == b.graph;
}

} // namespace presist
