#pragma once

#include "presist/graph.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace presist {

/// (1/2) sum over ordered adjacent pairs of multiplicity * |f(x)-f(y)|^p.
double p_energy(const Graph &g, std::span<const double> f, double p);

/// Delta_p f(x) = sum_y m(x,y) |f(x)-f(y)|^{p-2} (f(x)-f(y)).
std::vector<double> p_laplacian(const Graph &g, std::span<const double> f, double p);

/// Current |d|^{p-2} d carried by an edge with potential drop d; continuous at 0 for p > 1.
double p_current(double drop, double p) noexcept;

struct SolverConfig {
    /// Convergence: max free |Delta_p f| <= tolerance * capacity scale.
    double tolerance = 1e-10;
    int max_iterations = 500;
    /// Continuation on the smoothing (|d|^2 + eps^2)^{(p-2)/2} of the edge weights.
    double eps_start = 1e-2;
    double eps_end = 1e-10;
    /// p = 2 systems with more free vertices switch from sparse LDLT to preconditioned CG.
    std::size_t direct_limit = 5000;
    /// Optional starting values for the free vertices (defaults to the p=2 solution).
    std::optional<std::vector<double>> initial_free;
};

/// Minimizer of E_p with f = t on the source terminal and 0 on the ground terminal.
struct Potential {
    std::vector<double> values; // indexed by TerminalProblem vertex id
    double p = 2.0;
    double source_value = 1.0;
    double energy = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

Potential solve_potential(const TerminalProblem &problem, double p, double t, const SolverConfig &cfg = {});

struct FlowResult {
    double resistance = 0.0;
    double capacity = 0.0;
    double total_current = 0.0;
    Potential potential; // unit potential
    /// Current-normalised rescaling: C_p(t f) = 1 gives R_p = t^{p-1} = E_p(t f)^{p-1}.
    double normalized_source_value = 0.0;
    double normalized_energy = 0.0;
};

FlowResult p_resistance(const TerminalProblem &problem, double p, const SolverConfig &cfg = {});

struct MaxResistanceOptions {
    /// Fix one endpoint at vertex 0; valid for vertex-transitive inputs.
    bool transitive = false;
    std::size_t cap_p2 = 2000;
    std::size_t cap_general = 200;
    SolverConfig solver{};
};

struct MaxResistance {
    double value = 0.0;
    VertexId u = 0;
    VertexId v = 0;
};

MaxResistance max_resistance(const Graph &g, double p, const MaxResistanceOptions &opts = {});

/// |sum_{a in A} Delta_p f(a) - sum over edge-boundary edges of the outward current|.
double stokes_check(const Graph &g, std::span<const double> f, double p, std::span<const VertexId> set);

/// Flat structured-text records: scalar fields, then vertex id -> value.
std::string potential_record(const Potential &f);
std::string flow_record(const FlowResult &r);

} // namespace presist
