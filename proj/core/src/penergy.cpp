#include "presist/penergy.hpp"

#include "presist/error.hpp"

#include "presist/report.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace presist {

double p_current(double drop, double p) noexcept {
    if (drop == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(drop), p - 1.0), drop);
}

double p_energy(const Graph &g, std::span<const double> f, double p) {
    if (f.size() != g.size()) throw Error(ErrorCode::DimensionMismatch, "potential size != vertex count");
    double e = 0.0;
    for (VertexId u = 0; u < g.size(); ++u)
        for (const auto &nb : g.neighbors(u))
            if (u < nb.id) e += nb.multiplicity * std::pow(std::abs(f[u] - f[nb.id]), p);
    return e;
}

std::vector<double> p_laplacian(const Graph &g, std::span<const double> f, double p) {
    if (f.size() != g.size()) throw Error(ErrorCode::DimensionMismatch, "potential size != vertex count");
    std::vector<double> out(g.size(), 0.0);
    for (VertexId u = 0; u < g.size(); ++u)
        for (const auto &nb : g.neighbors(u)) out[u] += nb.multiplicity * p_current(f[u] - f[nb.id], p);
    return out;
}

double stokes_check(const Graph &g, std::span<const double> f, double p, std::span<const VertexId> set) {
    std::vector<char> in(g.size(), 0);
    for (VertexId v : set) in.at(v) = 1;
    const auto lap = p_laplacian(g, f, p);
    double inside = 0.0, outward = 0.0;
    for (VertexId a = 0; a < g.size(); ++a) {
        if (!in[a]) continue;
        inside += lap[a];
        for (const auto &nb : g.neighbors(a))
            if (!in[nb.id]) outward += nb.multiplicity * p_current(f[a] - f[nb.id], p);
    }
    return std::abs(inside - outward);
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct Layout {
    const TerminalProblem &prob;
    std::size_t k; // free vertices are 1..k
    double t;

    bool is_free(VertexId v) const noexcept { return v != prob.source && v != prob.ground; }
    std::vector<double> full(const Vec &x) const {
        std::vector<double> f(k + 2, 0.0);
        f[prob.source] = t;
        for (std::size_t i = 0; i < k; ++i) f[i + 1] = x[static_cast<Eigen::Index>(i)];
        return f;
    }
};

Vec solve_linear(const Layout &lay, const SolverConfig &cfg) {
    const auto &g = lay.prob.graph;
    const auto k = static_cast<Eigen::Index>(lay.k);
    std::vector<Eigen::Triplet<double>> trip;
    Vec rhs = Vec::Zero(k);
    for (VertexId u = 1; u <= lay.k; ++u) {
        const auto i = static_cast<Eigen::Index>(u - 1);
        trip.emplace_back(i, i, static_cast<double>(g.degree(u)));
        for (const auto &nb : g.neighbors(u)) {
            if (lay.is_free(nb.id)) trip.emplace_back(i, static_cast<Eigen::Index>(nb.id - 1), -static_cast<double>(nb.multiplicity));
            else if (nb.id == lay.prob.source) rhs[i] += nb.multiplicity * lay.t;
        }
    }
    SpMat lap(k, k);
    lap.setFromTriplets(trip.begin(), trip.end());
    if (lay.k > cfg.direct_limit) {
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
        cg.setTolerance(1e-14);
        cg.setMaxIterations(20 * k);
        cg.compute(lap);
        Vec x = cg.solve(rhs);
        if (cg.info() != Eigen::Success && cg.error() > 1e-11)
            throw Error(ErrorCode::NonConvergence, fmt::format("conjugate gradient stalled at relative error {}", cg.error()));
        return x;
    }
    Eigen::SimplicialLDLT<SpMat> ldlt(lap);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "Dirichlet Laplacian factorisation failed");
    Vec x = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "Dirichlet Laplacian solve failed");
    return x;
}

// Smoothed objective sum_e m (d^2 + eps^2)^{p/2} over the free variables.
struct Smoothed {
    const Layout &lay;
    double p;
    double eps;

    double value(const std::vector<double> &f) const {
        const auto &g = lay.prob.graph;
        double j = 0.0;
        for (VertexId u = 0; u < g.size(); ++u)
            for (const auto &nb : g.neighbors(u))
                if (u < nb.id) {
                    const double d = f[u] - f[nb.id];
                    j += nb.multiplicity * std::pow(d * d + eps * eps, 0.5 * p);
                }
        return j;
    }

    Vec gradient(const std::vector<double> &f) const {
        const auto &g = lay.prob.graph;
        Vec grad = Vec::Zero(static_cast<Eigen::Index>(lay.k));
        for (VertexId u = 1; u <= lay.k; ++u) {
            double s = 0.0;
            for (const auto &nb : g.neighbors(u)) {
                const double d = f[u] - f[nb.id];
                s += nb.multiplicity * std::pow(d * d + eps * eps, 0.5 * (p - 2.0)) * d;
            }
            grad[u - 1] = p * s;
        }
        return grad;
    }

    void hessian(const std::vector<double> &f, SpMat &h) const {
        const auto &g = lay.prob.graph;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(g.edge_count() * 2 + lay.k);
        for (VertexId u = 1; u <= lay.k; ++u) {
            double diag = 0.0;
            for (const auto &nb : g.neighbors(u)) {
                const double d = f[u] - f[nb.id];
                const double s = d * d + eps * eps;
                const double w = nb.multiplicity * p * std::pow(s, 0.5 * (p - 4.0)) * ((p - 1.0) * d * d + eps * eps);
                diag += w;
                if (lay.is_free(nb.id)) trip.emplace_back(u - 1, nb.id - 1, -w);
            }
            trip.emplace_back(u - 1, u - 1, diag);
        }
        h.setFromTriplets(trip.begin(), trip.end());
    }
};

// Drops below this fraction of t are indistinguishable from exact ties in double precision.
constexpr double kTieFloor = 64.0 * std::numeric_limits<double>::epsilon();
constexpr double kSmoothingFloor = 1e-16;

struct Residual {
    double max_free = 0.0;
    double source_current = 0.0;
};

Residual true_residual(const Layout &lay, const std::vector<double> &f, double p) {
    const auto &g = lay.prob.graph;
    const double floor = kTieFloor * lay.t;
    Residual r;
    for (VertexId u = 0; u < g.size(); ++u) {
        if (u == lay.prob.ground) continue;
        double s = 0.0;
        for (const auto &nb : g.neighbors(u)) {
            const double d = f[u] - f[nb.id];
            if (std::abs(d) > floor) s += nb.multiplicity * p_current(d, p);
        }
        if (u == lay.prob.source) r.source_current = s;
        else r.max_free = std::max(r.max_free, std::abs(s));
    }
    return r;
}

} // namespace

Potential solve_potential(const TerminalProblem &problem, double p, double t, const SolverConfig &cfg) {
    if (!(p > 1.0)) throw Error(ErrorCode::DomainError, "solver requires p > 1");
    if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "source value must be positive");
    if (problem.source == problem.ground) throw Error(ErrorCode::BadArguments, "source equals ground");

    const Layout lay{problem, problem.free_count(), t};
    Potential pot;
    pot.p = p;
    pot.source_value = t;

    Vec x;
    if (cfg.initial_free) {
        if (cfg.initial_free->size() != lay.k) throw Error(ErrorCode::DimensionMismatch, "initial guess size");
        x = Eigen::Map<const Vec>(cfg.initial_free->data(), static_cast<Eigen::Index>(lay.k));
    } else {
        x = lay.k ? solve_linear(lay, cfg) : Vec();
    }

    if (lay.k > 0 && (p != 2.0 || cfg.initial_free)) {
        SpMat hess(static_cast<Eigen::Index>(lay.k), static_cast<Eigen::Index>(lay.k));
        Eigen::SimplicialLDLT<SpMat> ldlt;
        bool analysed = false;
        int iterations = 0;
        bool converged = false;

        // Levels below eps_end are only visited while the true residual is still too large: the
        // smoothing bias on an edge with small |d| scales like eps^2 |d|^{p-3}.
        std::vector<double> levels;
        for (double e = cfg.eps_start; e > cfg.eps_end * 0.5; e *= 0.1) levels.push_back(e);
        if (levels.empty() || levels.back() > cfg.eps_end) levels.push_back(cfg.eps_end);
        while (levels.back() > kSmoothingFloor * 5.0) levels.push_back(levels.back() * 0.1);

        for (std::size_t li = 0; li < levels.size() && !converged; ++li) {
            const bool checking = levels[li] <= cfg.eps_end * (1 + 1e-12);
            const bool last = li + 1 == levels.size();
            const Smoothed obj{lay, p, levels[li] * t};
            auto f = lay.full(x);
            while (iterations < cfg.max_iterations) {
                if (checking) {
                    const auto res = true_residual(lay, f, p);
                    if (res.max_free <= cfg.tolerance * std::max(std::abs(res.source_current), std::numeric_limits<double>::min())) {
                        converged = true;
                        break;
                    }
                }
                const Vec grad = obj.gradient(f);
                obj.hessian(f, hess);
                if (!analysed) {
                    ldlt.analyzePattern(hess);
                    analysed = true;
                }
                ldlt.factorize(hess);
                if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "Hessian factorisation failed");
                Vec step = -ldlt.solve(grad);
                ++iterations;

                const double j0 = obj.value(f);
                const double slope = grad.dot(step);
                const bool resolvable = -slope > 1e3 * std::numeric_limits<double>::epsilon() * std::abs(j0);
                double alpha = 1.0;
                bool accepted = false;
                if (resolvable) {
                    // Halve while the objective keeps improving: for p < 2 the full step overshoots.
                    double best = std::numeric_limits<double>::infinity(), best_alpha = 0.0;
                    for (int bt = 0; bt < 40; ++bt, alpha *= 0.5) {
                        const double jt = obj.value(lay.full(x + alpha * step));
                        if (jt < best) {
                            best = jt;
                            best_alpha = alpha;
                        } else if (best <= j0 + 1e-4 * best_alpha * slope) {
                            break;
                        }
                    }
                    if (best <= j0 + 1e-4 * best_alpha * slope) {
                        alpha = best_alpha;
                        x += alpha * step;
                        accepted = true;
                    }
                }
                if (!accepted) {
                    // Objective differences are below rounding; use the gradient norm as merit.
                    const double g0 = grad.lpNorm<Eigen::Infinity>();
                    alpha = 1.0;
                    for (int bt = 0; bt < 10; ++bt, alpha *= 0.5) {
                        const Vec trial = x + alpha * step;
                        if (obj.gradient(lay.full(trial)).lpNorm<Eigen::Infinity>() < g0) {
                            x = trial;
                            accepted = true;
                            break;
                        }
                    }
                    if (!accepted) {
                        f = lay.full(x);
                        break;
                    }
                }
                f = lay.full(x);
                const double step_size = alpha * step.lpNorm<Eigen::Infinity>();
                if (!last && step_size <= 1e-3 * levels[li] * t) break;
            }
            if (iterations >= cfg.max_iterations) break;
        }
        pot.iterations = iterations;
    }

    pot.values = lay.full(x);
    for (std::size_t i = 1; i <= lay.k; ++i) pot.values[i] = std::clamp(pot.values[i], 0.0, t);
    const auto res = true_residual(lay, pot.values, p);
    pot.residual = res.max_free;
    pot.energy = p_energy(problem.graph, pot.values, p);
    const double scale = std::max(std::abs(res.source_current), std::numeric_limits<double>::min());
    if (pot.residual > cfg.tolerance * scale)
        throw Error(ErrorCode::NonConvergence,
                    fmt::format("p-Laplacian residual {:.3e} after {} iterations (scale {:.6g})", pot.residual,
                                pot.iterations, scale));
    return pot;
}

FlowResult p_resistance(const TerminalProblem &problem, double p, const SolverConfig &cfg) {
    FlowResult out;
    out.potential = solve_potential(problem, p, 1.0, cfg);
    out.capacity = out.potential.energy;
    out.total_current = p_laplacian(problem.graph, out.potential.values, p)[problem.source];
    out.resistance = 1.0 / out.capacity;

    // Rescale so that the total current is one: current is homogeneous of degree p-1.
    const double t = std::pow(out.total_current, -1.0 / (p - 1.0));
    std::vector<double> scaled = out.potential.values;
    for (auto &v : scaled) v *= t;
    out.normalized_source_value = t;
    out.normalized_energy = p_energy(problem.graph, scaled, p);
    return out;
}

MaxResistance max_resistance(const Graph &g, double p, const MaxResistanceOptions &opts) {
    const std::size_t n = g.size();
    if (n < 2) throw Error(ErrorCode::BadArguments, "max_resistance needs at least two vertices");
    MaxResistance best{-1.0, 0, 0};
    auto consider = [&](double r, VertexId u, VertexId v) {
        if (r > best.value * (1.0 + 1e-12)) best = {r, u, v};
    };

    if (p == 2.0) {
        if (n > opts.cap_p2) throw Error(ErrorCode::SizeCapExceeded, "max_resistance p=2 size cap");
        // Ground vertex 0; G = inverse of the reduced Laplacian gives all pairwise resistances.
        const auto m = static_cast<Eigen::Index>(n - 1);
        Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
        for (VertexId u = 1; u < n; ++u) {
            lap(u - 1, u - 1) = static_cast<double>(g.degree(u));
            for (const auto &nb : g.neighbors(u))
                if (nb.id != 0) lap(u - 1, nb.id - 1) -= nb.multiplicity;
        }
        const Eigen::MatrixXd green = lap.llt().solve(Eigen::MatrixXd::Identity(m, m));
        auto gr = [&](VertexId a, VertexId b) { return (a == 0 || b == 0) ? 0.0 : green(a - 1, b - 1); };
        const VertexId last_u = opts.transitive ? 1 : static_cast<VertexId>(n);
        for (VertexId u = 0; u < last_u; ++u)
            for (VertexId v = u + 1; v < n; ++v) consider(gr(u, u) + gr(v, v) - 2.0 * gr(u, v), u, v);
        return best;
    }

    if (n > opts.cap_general) throw Error(ErrorCode::SizeCapExceeded, "max_resistance general-p size cap");
    const VertexId last_u = opts.transitive ? 1 : static_cast<VertexId>(n);
    for (VertexId u = 0; u < last_u; ++u) {
        for (VertexId v = u + 1; v < n; ++v) {
            const VertexId src[] = {u};
            const VertexId gnd[] = {v};
            consider(p_resistance(collapse_terminals(g, src, gnd), p, opts.solver).resistance, u, v);
        }
    }
    return best;
}

namespace {

std::string values_block(const std::vector<double> &values) {
    std::string out = "values:\n";
    for (std::size_t i = 0; i < values.size(); ++i) out += fmt::format("  {}: {}\n", i, format_real(values[i]));
    return out;
}

} // namespace

std::string potential_record(const Potential &f) {
    return fmt::format("p: {}\nsource_value: {}\nenergy: {}\nresidual: {}\niterations: {}\n", format_real(f.p),
                       format_real(f.source_value), format_real(f.energy), format_real(f.residual), f.iterations) +
           values_block(f.values);
}

std::string flow_record(const FlowResult &r) {
    return fmt::format("p: {}\nresistance: {}\ncapacity: {}\ntotal_current: {}\nnormalized_source_value: {}\n"
                       "normalized_energy: {}\nresidual: {}\niterations: {}\n",
                       format_real(r.potential.p), format_real(r.resistance), format_real(r.capacity),
                       format_real(r.total_current), format_real(r.normalized_source_value),
                       format_real(r.normalized_energy), format_real(r.potential.residual), r.potential.iterations) +
           values_block(r.potential.values);
}

} // namespace presist
