#pragma once

#include "presist/graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace presist {

struct EscapeEstimate {
    double p_hat = 0.0;
    std::uint64_t trials = 0;    // walks that finished; censored walks are excluded
    std::uint64_t successes = 0;
    double standard_error = 0.0; // sqrt(p_hat (1 - p_hat) / trials)
    std::uint64_t seed = 0;
    std::uint64_t censored = 0;
    int r = 0;
};

struct WalkOptions {
    unsigned threads = 1;
    /// Trials per chunk; each trial uses its own stream, so results do not depend on this.
    std::uint64_t chunk = 4096;
};

/// Fraction of walks from the center reaching S(x, r) before returning to the center.
EscapeEstimate simulate_escape(const BallGraph &ball, int r, std::uint64_t trials, std::uint64_t seed,
                               const WalkOptions &opts = {});

/// All radii 1..r_max from one set of walks: a walk counts for r when its maximal layer
/// before returning reaches r. Entry i is radius i+1 and equals simulate_escape(ball, i+1, ...).
std::vector<EscapeEstimate> simulate_escape_coupled(const BallGraph &ball, int r_max, std::uint64_t trials,
                                                    std::uint64_t seed, const WalkOptions &opts = {});

/// 1 / (deg(x) R_2(x <-> S(x, r))).
double escape_via_resistance(const BallGraph &ball, int r);

/// P[x -> Y] on a finite graph. Walks exceeding step_cap are censored and dropped from p_hat.
/// step_cap = 0 selects 100 n^2.
EscapeEstimate hit_before_return(const Graph &g, VertexId x, std::span<const VertexId> targets, std::uint64_t trials,
                                 std::uint64_t seed, std::uint64_t step_cap = 0, const WalkOptions &opts = {});

/// CSV with header `spec_hash,r,trials,p_hat,stderr,seed`.
std::string escape_csv(const std::string &spec_hash, std::span<const EscapeEstimate> rows);

} // namespace presist
