#include "presist/walks.hpp"

#include "presist/error.hpp"
#include "presist/penergy.hpp"
#include "presist/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <thread>

namespace presist {

namespace {

VertexId step(const Graph &g, VertexId u, CounterRng &rng) {
    auto pick = rng.below(g.degree(u));
    for (const auto &nb : g.neighbors(u)) {
        if (pick < nb.multiplicity) return nb.id;
        pick -= nb.multiplicity;
    }
    return g.neighbors(u).back().id;
}

// Runs fn(trial, rng) for every trial and returns the outcomes in trial order.
template <class Fn>
std::vector<std::int64_t> run_trials(std::uint64_t trials, std::uint64_t seed, const WalkOptions &opts, Fn fn) {
    std::vector<std::int64_t> out(trials);
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk);
    const std::uint64_t chunks = (trials + chunk - 1) / chunk;
    auto worker = [&](unsigned tid, unsigned nthreads) {
        for (std::uint64_t c = tid; c < chunks; c += nthreads) {
            const std::uint64_t end = std::min(trials, (c + 1) * chunk);
            for (std::uint64_t i = c * chunk; i < end; ++i) {
                CounterRng rng(derive_seed(seed, i));
                out[i] = fn(rng);
            }
        }
    };
    const unsigned nthreads = static_cast<unsigned>(std::clamp<std::uint64_t>(opts.threads, 1, std::max<std::uint64_t>(chunks, 1)));
    if (nthreads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
    }
    return out;
}

EscapeEstimate finish(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed, std::uint64_t censored, int r) {
    EscapeEstimate e;
    e.trials = trials;
    e.successes = successes;
    e.seed = seed;
    e.censored = censored;
    e.r = r;
    e.p_hat = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    e.standard_error = trials ? std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials)) : 0.0;
    return e;
}

// Maximal layer reached before returning to the center, stopping early at `stop`.
std::int64_t excursion_height(const BallGraph &ball, int stop, CounterRng &rng) {
    VertexId u = step(ball.base, ball.center, rng);
    int height = ball.layer[u];
    while (height < stop) {
        u = step(ball.base, u, rng);
        if (u == ball.center) break;
        height = std::max(height, ball.layer[u]);
    }
    return height;
}

void check_walk_args(const BallGraph &ball, int r, std::uint64_t trials) {
    if (trials == 0) throw Error(ErrorCode::BadArguments, "trials must be positive");
    if (r < 1) throw Error(ErrorCode::BadArguments, "escape radius must be at least 1");
    if (ball.radius < r) throw Error(ErrorCode::RadiusTooSmall, fmt::format("ball radius {} < r = {}", ball.radius, r));
}

} // namespace

EscapeEstimate simulate_escape(const BallGraph &ball, int r, std::uint64_t trials, std::uint64_t seed,
                               const WalkOptions &opts) {
    check_walk_args(ball, r, trials);
    const auto heights = run_trials(trials, seed, opts, [&](CounterRng &rng) { return excursion_height(ball, r, rng); });
    const auto hits = static_cast<std::uint64_t>(std::count_if(heights.begin(), heights.end(), [&](auto h) { return h >= r; }));
    return finish(hits, trials, seed, 0, r);
}

std::vector<EscapeEstimate> simulate_escape_coupled(const BallGraph &ball, int r_max, std::uint64_t trials,
                                                    std::uint64_t seed, const WalkOptions &opts) {
    check_walk_args(ball, r_max, trials);
    const auto heights =
        run_trials(trials, seed, opts, [&](CounterRng &rng) { return excursion_height(ball, r_max, rng); });
    std::vector<std::uint64_t> reached(static_cast<std::size_t>(r_max) + 1, 0);
    for (auto h : heights) ++reached[static_cast<std::size_t>(h)];
    std::vector<EscapeEstimate> out;
    std::uint64_t at_least = 0;
    for (int r = r_max; r >= 1; --r) {
        at_least += reached[static_cast<std::size_t>(r)];
        out.push_back(finish(at_least, trials, seed, 0, r));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double escape_via_resistance(const BallGraph &ball, int r) {
    if (r < 1) throw Error(ErrorCode::BadArguments, "escape radius must be at least 1");
    const auto res = p_resistance(dirichlet_problem(ball, r - 1, DirichletMode::Sphere), 2.0);
    return 1.0 / (static_cast<double>(ball.base.degree(ball.center)) * res.resistance);
}

EscapeEstimate hit_before_return(const Graph &g, VertexId x, std::span<const VertexId> targets, std::uint64_t trials,
                                 std::uint64_t seed, std::uint64_t step_cap, const WalkOptions &opts) {
    if (trials == 0) throw Error(ErrorCode::BadArguments, "trials must be positive");
    if (targets.empty()) throw Error(ErrorCode::BadArguments, "target set is empty");
    if (x >= g.size()) throw Error(ErrorCode::BadArguments, "start vertex out of range");
    std::vector<char> in_target(g.size(), 0);
    for (VertexId y : targets) {
        if (y >= g.size()) throw Error(ErrorCode::BadArguments, "target vertex out of range");
        if (y == x) throw Error(ErrorCode::BadArguments, "start vertex lies in the target set");
        in_target[y] = 1;
    }
    const auto n = static_cast<std::uint64_t>(g.size());
    if (step_cap == 0) step_cap = 100 * n * n;

    // Outcome: 1 hit, 0 returned, -1 censored.
    const auto outcomes = run_trials(trials, seed, opts, [&](CounterRng &rng) -> std::int64_t {
        VertexId u = x;
        for (std::uint64_t s = 0; s < step_cap; ++s) {
            u = step(g, u, rng);
            if (in_target[u]) return 1;
            if (u == x) return 0;
        }
        return -1;
    });
    std::uint64_t hits = 0, censored = 0;
    for (auto o : outcomes) {
        hits += o == 1;
        censored += o == -1;
    }
    if (censored > 0)
        std::clog << fmt::format("warning: {} of {} walks censored at {} steps\n", censored, trials, step_cap);
    return finish(hits, trials - censored, seed, censored, 0);
}

std::string escape_csv(const std::string &spec_hash, std::span<const EscapeEstimate> rows) {
    std::string out = "spec_hash,r,trials,p_hat,stderr,seed\n";
    for (const auto &e : rows)
        out += fmt::format("{},{},{},{},{},{}\n", spec_hash, e.r, e.trials, e.p_hat, e.standard_error, e.seed);
    return out;
}

} // namespace presist
