#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace presist::detail {

using Mask = std::uint64_t;

/// Calls visit(S) exactly once for every connected S with root in S, S inside `allowed`,
/// and S disjoint from `excluded`. adj[v] is the neighbour mask of v (at most 64 vertices).
template <class Visit>
void for_each_connected_set(const std::vector<Mask> &adj, unsigned root, Mask allowed, Mask excluded, Visit &&visit) {
    struct Rec {
        const std::vector<Mask> &adj;
        Mask allowed;
        Visit &visit;

        void operator()(Mask set, Mask candidates, Mask excl) {
            visit(set);
            while (candidates) {
                const Mask v = candidates & (0 - candidates);
                candidates ^= v;
                const Mask grown = set | v;
                const Mask next = (candidates | adj[static_cast<unsigned>(std::countr_zero(v))]) & allowed & ~grown & ~excl;
                (*this)(grown, next, excl);
                excl |= v;
            }
        }
    };
    const Mask start = Mask{1} << root;
    Rec{adj, allowed & ~excluded, visit}(start, adj[root] & allowed & ~excluded & ~start, excluded);
}

} // namespace presist::detail
