#pragma once

#include "presist/graph.hpp"
#include "presist/report.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace presist {

/// Pairwise disjoint edge sets, each separating the source set from the ground set.
struct CutsetFamily {
    std::vector<std::vector<WeightedEdge>> cutsets;
    std::vector<double> sizes; // multiplicity-weighted
};

/// Validates disjointness and separation (BFS from the source avoiding each cutset).
/// Throws Error(InvalidCutsets).
CutsetFamily make_cutset_family(const Graph &g, std::span<const VertexId> source, std::span<const VertexId> ground,
                                std::vector<std::vector<WeightedEdge>> cutsets);

/// (sum_i |Pi_i|^{-1/(p-1)})^{p-1}.
double nash_williams_bound(const CutsetFamily &family, double p);

/// Edge boundaries X_0, ..., X_{r-1} of the balls B(x, i); they separate x from S(x, r).
CutsetFamily sphere_cutsets(const BallGraph &ball, int r);

/// m / (12 phi(2m)). Throws OutOfProfileRange when phi(2m) lies beyond the profile.
double csc_bound(const GrowthProfile &profile, std::uint64_t m);

/// j_{A,p} from the set size, boundary sizes and the graph degree.
double j_from_counts(double size, double vertex_boundary, double edge_boundary, double degree, double p);
/// j_{A,p} with deg(Gamma) taken as the maximal degree of g. Throws EmptyBoundary.
double j_quantity(const Graph &g, std::span<const VertexId> set, double p);

enum class BkStrategy { Exhaustive, Profile };

/// Lower bound on |dA| for sets of a given size, used by the profile strategy.
using BoundaryLowerBound = std::function<double(std::uint64_t size)>;

BoundaryLowerBound csc_boundary(const GrowthProfile &profile);

struct BkOptions {
    BkStrategy strategy = BkStrategy::Exhaustive;
    std::size_t exhaustive_cap = 20;
    BoundaryLowerBound min_boundary; // required by the profile strategy
    /// deg(Gamma) in j; defaults to the maximal degree of the graph.
    std::optional<double> degree;
};

struct BkBound {
    double value = 0.0;             // right-hand side raised to the power p-1
    double root = 0.0;              // right-hand side before raising
    std::vector<double> scale_terms; // max j per dyadic size class
};

/// Ball form: u in a finite connected set B, bounding R_p(u <-> dB). Neighbours of B must be
/// present in g so that boundaries are exact.
BkBound bk_upper_bound_ball(const Graph &g, std::span<const VertexId> ball, VertexId u, double p,
                            const BkOptions &opts = {});
/// Finite form: bounding R_p(u <-> v) on a finite graph.
BkBound bk_upper_bound_finite(const Graph &g, VertexId u, VertexId v, double p, const BkOptions &opts = {});

struct Exponents {
    double alpha = 0.0;
    double h = 0.0;
    double h_star = 0.0;
    double b = 0.0;
};

double alpha_exponent(double p);
double h_function(int d);
double h_star(double p);
double b_function(double q);
Exponents exponent_functions(double p, double q, int d);

enum class Theorem {
    T1_8_lower,
    T1_8_upper,
    T1_10_lower,
    T1_10_upper_int,
    T1_10_upper_nonint,
    T1_11,
    T1_11_lower,
    T1_11_upper_nonint,
    T1_12,
    T1_13,
    T_var_converse,
    P7_2_cases,
    P7_4_cases,
};

std::string_view to_string(Theorem t) noexcept;
Theorem theorem_from_string(std::string_view s);

/// Symbols a formula may reference; a missing symbol raises Error(MissingParam).
struct TheoremParams {
    std::optional<double> p, r, n, q, eps;
    std::optional<double> beta_r, beta_n, beta_1, beta_4r;
    std::optional<double> degree, diameter, order;
};

/// Formula value with implied constant 1, natural logarithms.
double theorem_rhs(Theorem t, const TheoremParams &params);

/// Lower bound on R_p(u <-> v) for d(u,v) = diam, via diameter cutsets.
double diameter_lower_bound(double p, double diameter, double edges, double degree_u);
/// Coarser form with 4(|E| - deg(u)) replaced by 2 deg (|Gamma| - 2).
double diameter_lower_bound_transitive(double p, double diameter, double degree, double order);

/// (1/k) (sum_{i=1}^{n/2} i^{(1-d)/(p-1)})^{p-1} for (Z/nZ)^d + Z/kZ.
double sharpness_lower_bound(int n, int d, int k, double p);

/// max(a,b)^p <= (a+b)^p <= 2^p max(a,b)^p.
bool power_distance_holds(double a, double b, double p);

/// beta(r) <= beta(4r)/2; nullopt when the profile is too short or the diameter is below 4r.
std::optional<BoundReport> check_four_r(const GrowthProfile &profile, int r);

/// j_{A,p} <= (1+C)|A| / xi^{p/(p-1)} with xi = |dA|; nullopt when xi > C|A|.
std::optional<BoundReport> check_second_term_only(const Graph &g, std::span<const VertexId> set, double p,
                                                  double c = 1.0);

/// |B(x,n)| >= (deg+1) n / 3 for 1 <= n <= radius (strict), plus ratio reports for the
/// growth lower bounds under beta(r) >= r^q and beta(r) >= r^q beta(1).
std::vector<BoundReport> check_growth_bounds(const GrowthProfile &profile, int r);

} // namespace presist
