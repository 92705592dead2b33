#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace presist {

using VertexId = std::uint32_t;
using Element = std::vector<std::int64_t>;

inline constexpr std::size_t kDefaultSizeCap = 5'000'000;

enum class Family { TorusProduct, CyclicChords, ZTimesTorus, Explicit };

/// One direct factor of an abelian group: Z/mZ for m >= 2, or Z when infinite.
struct Factor {
    std::int64_t modulus = 0; // 0 encodes the infinite cyclic group

    static Factor cyclic(std::int64_t m) { return Factor{m}; }
    static Factor integers() { return Factor{0}; }
    bool infinite() const noexcept { return modulus == 0; }
    bool operator==(const Factor &) const = default;
};

/// A term of the generating set; the full set is the union of all terms.
struct GeneratorTerm {
    enum class Kind {
        Box,     // {-1,0,1} on every factor not claimed by a Full/BoxFull term
        Full,    // every element of factor `index`, zero elsewhere
        BoxFull, // {-1,0,1} on the other factors times all of factor `index`
        Chords,  // {-k,...,k} on factor 0
        Offset,  // one explicit group element
    };
    Kind kind = Kind::Box;
    int index = 0;
    std::int64_t k = 0;
    Element offset;

    static GeneratorTerm box() { return {Kind::Box, 0, 0, {}}; }
    static GeneratorTerm full(int i) { return {Kind::Full, i, 0, {}}; }
    static GeneratorTerm box_full(int i) { return {Kind::BoxFull, i, 0, {}}; }
    static GeneratorTerm chords(std::int64_t k) { return {Kind::Chords, 0, k, {}}; }
    static GeneratorTerm at(Element e) { return {Kind::Offset, 0, 0, std::move(e)}; }
    bool operator==(const GeneratorTerm &) const = default;
};

/// Declarative description of an abelian Cayley graph and the ball radius of interest.
struct GraphSpec {
    Family family = Family::TorusProduct;
    std::vector<Factor> factors;
    std::vector<GeneratorTerm> generators;
    int radius = 0;

    bool operator==(const GraphSpec &) const = default;

    std::size_t rank() const noexcept { return factors.size(); }
    bool has_infinite_factor() const noexcept;

    /// Common families.
    static GraphSpec cycle(std::int64_t n, int radius = 0);
    static GraphSpec line(int radius);
    static GraphSpec lattice(int d, int radius);                   // Z^d, box generators
    static GraphSpec torus(std::int64_t n, int d, int radius = 0); // (Z/nZ)^d, box generators
    static GraphSpec chords(std::int64_t n, std::int64_t k, int radius = 0);
    static GraphSpec torus_with_fiber(std::int64_t n, int d, std::int64_t k, int radius = 0);
    static GraphSpec line_times_torus(std::int64_t m, int d, int radius);
};

std::string_view to_string(Family f) noexcept;
Family family_from_string(std::string_view s);

/// Validates invariants and expands the generating set into canonical, symmetric,
/// deduplicated non-identity elements (sorted lexicographically).
std::vector<Element> expand_generators(const GraphSpec &spec);

/// Reduces each finite coordinate into [0, modulus).
Element canonical(const GraphSpec &spec, Element e);

struct Neighbor {
    VertexId id;
    std::uint32_t multiplicity;
};

struct WeightedEdge {
    VertexId u;
    VertexId v;
    std::uint32_t multiplicity;
};

/// Undirected multigraph in CSR form. Connected, symmetric, without self-loops.
class Graph {
public:
    Graph() = default;

    /// Merges duplicate (u,v) pairs by summing multiplicities and drops self-loops.
    /// Throws Error(Disconnected) unless the result is connected.
    static Graph from_edges(std::size_t n, std::span<const WeightedEdge> edges);

    std::size_t size() const noexcept { return degree_.size(); }
    std::span<const Neighbor> neighbors(VertexId v) const noexcept {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    /// Multiplicity-weighted degree.
    std::uint64_t degree(VertexId v) const noexcept { return degree_[v]; }
    std::uint64_t max_degree() const noexcept { return max_degree_; }
    /// Number of undirected edges counted with multiplicity.
    std::uint64_t edge_count() const noexcept { return edge_count_; }
    std::uint32_t multiplicity(VertexId u, VertexId v) const noexcept;
    std::vector<WeightedEdge> edges() const;

    bool operator==(const Graph &) const;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> neighbors_;
    std::vector<std::uint64_t> degree_;
    std::uint64_t max_degree_ = 0;
    std::uint64_t edge_count_ = 0;
};

/// BFS distances from `source`; unreachable vertices get -1.
std::vector<int> bfs_distances(const Graph &g, VertexId source);

/// Induced subgraph on a ball of a Cayley graph, numbered by (layer, lexicographic element).
struct BallGraph {
    Graph base;
    VertexId center = 0;
    int radius = 0;
    std::vector<int> layer;
    std::vector<std::uint32_t> exit_degree;
    std::vector<Element> elements;
    std::uint64_t ambient_degree = 0;
    std::vector<std::int64_t> moduli; // per factor, 0 for Z

    std::size_t size() const noexcept { return base.size(); }
    /// True when the ambient graph is finite and the ball covers all of it.
    bool covers_ambient() const noexcept;
    std::vector<VertexId> sphere(int r) const;
    std::vector<VertexId> ball(int r) const;
    std::optional<VertexId> find(const Element &e) const;
};

struct GrowthProfile {
    std::vector<std::uint64_t> beta;
    std::vector<std::uint64_t> sigma;
    std::uint64_t degree = 0;
    std::optional<int> diameter;

    int max_radius() const noexcept { return static_cast<int>(beta.size()) - 1; }
    /// phi(xi) = min{ r >= 1 : beta(r) >= xi }, or nullopt when beyond the profile.
    std::optional<int> phi(double xi) const noexcept;
};

struct BuildOptions {
    std::size_t size_cap = kDefaultSizeCap;
};

Graph build_cayley_graph(const GraphSpec &spec, const BuildOptions &opts = {});
std::vector<Element> cayley_vertex_elements(const GraphSpec &spec);
BallGraph build_ball(const GraphSpec &spec, int radius, const BuildOptions &opts = {});

GrowthProfile growth_profile(const BallGraph &ball);
GrowthProfile growth_profile(const Graph &g, VertexId center);

struct Boundary {
    std::size_t vertex_boundary = 0;
    std::uint64_t edge_boundary = 0;
    std::vector<VertexId> boundary_vertices;
};

/// External vertex boundary and multiplicity-weighted edge boundary of A.
Boundary boundary(const Graph &g, std::span<const VertexId> set);

/// Source and ground terminals collapsed to single vertices. Source is vertex 0, ground is
/// the last vertex, free vertices keep the relative order of their original ids.
struct TerminalProblem {
    Graph graph;
    VertexId source = 0;
    VertexId ground = 0;
    std::vector<VertexId> free_original; // original id of free vertex i+1

    std::size_t free_count() const noexcept { return free_original.size(); }
};

/// Collapses the sets, drops self-loops, and discards free components that do not touch
/// both terminals (their potential is forced and they carry no energy).
TerminalProblem collapse_terminals(const Graph &g, std::span<const VertexId> source,
                                   std::span<const VertexId> ground);

enum class DirichletMode { Sphere, Complement };

/// Center against S(x, r+1) (Sphere) or against everything outside B(x, r) (Complement).
TerminalProblem dirichlet_problem(const BallGraph &ball, int r, DirichletMode mode);

/// S(x, inner) against S(x, outer).
TerminalProblem sphere_to_sphere_problem(const BallGraph &ball, int inner, int outer);

bool isomorphic_by_identity(const TerminalProblem &a, const TerminalProblem &b);

} // namespace presist
