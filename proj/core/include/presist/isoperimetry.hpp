#pragma once

#include "presist/graph.hpp"
#include "presist/report.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace presist {

enum class ProfileMode { AllSets, ConnectedSets };

struct ProfileEntry {
    std::size_t size = 0;
    std::size_t min_vertex_boundary = 0;
    std::uint64_t min_edge_boundary = 0;
    std::vector<VertexId> vertex_witness; // attains min_vertex_boundary
    std::vector<VertexId> edge_witness;   // attains min_edge_boundary
};

struct IsoProfile {
    std::vector<ProfileEntry> by_size; // sizes lo..hi in order
    ProfileMode mode = ProfileMode::AllSets;
    bool exhaustive = false;
    std::size_t lo = 0, hi = 0;

    const ProfileEntry &at(std::size_t size) const;
};

inline constexpr std::size_t kAllSetsCap = 14;
inline constexpr std::size_t kConnectedSetsCap = 20;

/// Minimum vertex and edge boundaries for every proper set size 1..n-1. Ties go to the
/// lexicographically least sorted vertex list. max_n = 0 selects the default cap of the mode.
IsoProfile exact_profile(const Graph &g, ProfileMode mode, std::size_t max_n = 0);

/// CSV `size,min_vertex_boundary,min_edge_boundary,vertex_witness,edge_witness`, witnesses as hex masks.
std::string profile_csv(const IsoProfile &profile);

/// Exact minimum |dA| against |A| / (12 phi(2|A|)) for every size up to n/2.
std::vector<BoundReport> verify_csc(const Graph &g, std::size_t max_n = kAllSetsCap);

/// Exhaustive minimum of |d^E A| over k <= |A| <= n-k on Z_{n,k} against k^2/4 - 1.
BoundReport verify_cyclic_edge_iso(int n, int k, int max_n = 16);

enum class IsoTheorem { T6_1, T6_2, T6_3, C6_x, L_iso_rel_lin, P_iso_conv };

std::string_view to_string(IsoTheorem t) noexcept;
IsoTheorem iso_theorem_from_string(std::string_view s);

struct IsoCheckOptions {
    int r = 0; // hypothesis radius; 0 selects ball.radius - 1
    std::uint64_t seed = 1;
    std::size_t random_sets_per_decade = 200;
    std::size_t exhaustive_cap = kConnectedSetsCap;
};

/// Candidate sets inside B(x, R-1) with |A| <= beta(r)/2: every connected set through the
/// center when the interior is small, otherwise balls, coordinate half-spaces and seeded
/// random connected sets.
std::vector<std::vector<VertexId>> iso_candidate_sets(const BallGraph &ball, const IsoCheckOptions &opts,
                                                      bool *exhaustive = nullptr);

std::vector<BoundReport> check_iso_theorems(const BallGraph &ball, IsoTheorem which, const IsoCheckOptions &opts = {});

} // namespace presist
