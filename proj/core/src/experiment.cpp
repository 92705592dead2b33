#include "presist/experiment.hpp"

#include "presist/bounds.hpp"
#include "presist/error.hpp"
#include "presist/isoperimetry.hpp"
#include "presist/penergy.hpp"
#include "presist/rng.hpp"
#include "presist/spec_io.hpp"
#include "presist/walks.hpp"
#include "spec_yaml.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace presist {

namespace {

constexpr std::array kKinds{
    std::pair{ExperimentKind::Resistance, "resistance"},   std::pair{ExperimentKind::Escape, "escape"},
    std::pair{ExperimentKind::Growth, "growth"},           std::pair{ExperimentKind::Isoperimetry, "isoperimetry"},
    std::pair{ExperimentKind::Sandwich, "sandwich"},       std::pair{ExperimentKind::Table1, "table1"},
    std::pair{ExperimentKind::SharpnessNw, "sharpness_nw"}, std::pair{ExperimentKind::VarConverse, "var_converse"},
};

constexpr std::array kFormats{
    std::pair{OutputFormat::Csv, "csv"},
    std::pair{OutputFormat::StructuredText, "structured-text"},
    std::pair{OutputFormat::Plotdata, "plotdata"},
};

bool uses_graph(ExperimentKind k) { return k != ExperimentKind::Table1 && k != ExperimentKind::SharpnessNw; }

bool looks_numeric(const std::string &s) {
    if (s.empty()) return false;
    char *end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::string emit_token(const std::string &s) {
    if (looks_numeric(s) || s == "true" || s == "false") return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

} // namespace

std::string_view to_string(ExperimentKind k) noexcept {
    for (const auto &[v, name] : kKinds)
        if (v == k) return name;
    return "?";
}

ExperimentKind experiment_from_string(std::string_view s) {
    for (const auto &[v, name] : kKinds)
        if (s == name) return v;
    throw Error(ErrorCode::ParseError, fmt::format("unknown experiment '{}'", s));
}

std::string_view to_string(OutputFormat f) noexcept {
    for (const auto &[v, name] : kFormats)
        if (v == f) return name;
    return "?";
}

OutputFormat format_from_string(std::string_view s) {
    for (const auto &[v, name] : kFormats)
        if (s == name) return v;
    throw Error(ErrorCode::ParseError, fmt::format("unknown output format '{}'", s));
}

std::string_view file_extension(OutputFormat f) noexcept {
    switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::StructuredText: return "yaml";
    case OutputFormat::Plotdata: return "dat";
    }
    return "txt";
}

std::vector<std::string_view> allowed_params(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Resistance: return {"p", "r", "target"};
    case ExperimentKind::Escape: return {"r", "trials", "seed", "coupled", "identity"};
    case ExperimentKind::Growth: return {};
    case ExperimentKind::Isoperimetry: return {"mode", "theorems", "r", "seed", "connected"};
    case ExperimentKind::Sandwich: return {"p", "r", "strategy"};
    case ExperimentKind::Table1: return {"p", "d", "n", "k", "eps"};
    case ExperimentKind::SharpnessNw: return {"p", "d", "n", "k"};
    case ExperimentKind::VarConverse: return {"n", "r"};
    }
    return {};
}

void validate_manifest(const ExperimentManifest &m) {
    const auto allowed = allowed_params(m.experiment);
    for (const auto &[key, value] : m.params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw Error(ErrorCode::InvalidSpec,
                        fmt::format("parameter '{}' is not consumed by experiment '{}'", key, to_string(m.experiment)));
        if (value.items.empty()) throw Error(ErrorCode::InvalidSpec, fmt::format("parameter '{}' is empty", key));
    }
    if (uses_graph(m.experiment) && !m.graph)
        throw Error(ErrorCode::InvalidSpec, fmt::format("experiment '{}' needs a graph", to_string(m.experiment)));
    if (!uses_graph(m.experiment) && m.graph)
        throw Error(ErrorCode::InvalidSpec, fmt::format("experiment '{}' builds its own graphs; remove 'graph'", to_string(m.experiment)));
    if (m.output_path.empty()) throw Error(ErrorCode::InvalidSpec, "output path is empty");
}

ExperimentManifest parse_manifest(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception &e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!root.IsMap()) throw Error(ErrorCode::ParseError, "manifest must be a mapping");
    ExperimentManifest m;
    try {
        for (const auto &kv : root) {
            const auto key = kv.first.as<std::string>();
            if (key != "experiment" && key != "graph" && key != "params" && key != "output")
                throw Error(ErrorCode::ParseError, fmt::format("unknown manifest key '{}'", key));
        }
        if (!root["experiment"]) throw Error(ErrorCode::ParseError, "missing key 'experiment'");
        m.experiment = experiment_from_string(root["experiment"].as<std::string>());
        if (root["graph"]) m.graph = detail::spec_from_node(root["graph"]);
        if (const auto params = root["params"]) {
            if (!params.IsMap() && !params.IsNull()) throw Error(ErrorCode::ParseError, "params must be a mapping");
            for (const auto &kv : params) {
                ParamValue v;
                if (kv.second.IsSequence()) {
                    v.list = true;
                    for (const auto &x : kv.second) {
                        if (!x.IsScalar()) throw Error(ErrorCode::ParseError, "nested lists are not allowed in params");
                        v.items.push_back(x.as<std::string>());
                    }
                } else if (kv.second.IsScalar()) {
                    v.items.push_back(kv.second.as<std::string>());
                } else {
                    throw Error(ErrorCode::ParseError, fmt::format("parameter '{}' must be a scalar or list", kv.first.as<std::string>()));
                }
                m.params.emplace(kv.first.as<std::string>(), std::move(v));
            }
        }
        if (const auto out = root["output"]) {
            if (!out.IsMap()) throw Error(ErrorCode::ParseError, "output must be a mapping");
            for (const auto &kv : out) {
                const auto key = kv.first.as<std::string>();
                if (key == "path") m.output_path = kv.second.as<std::string>();
                else if (key == "format") m.format = format_from_string(kv.second.as<std::string>());
                else throw Error(ErrorCode::ParseError, fmt::format("unknown output key '{}'", key));
            }
        }
    } catch (const YAML::Exception &e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    validate_manifest(m);
    return m;
}

ExperimentManifest load_manifest(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

std::string emit_manifest(const ExperimentManifest &m) {
    std::string out = fmt::format("experiment: {}\n", to_string(m.experiment));
    if (m.graph) out += "graph:\n" + emit_spec_block(*m.graph, 2);
    if (!m.params.empty()) {
        out += "params:\n";
        for (const auto &[key, v] : m.params) {
            std::vector<std::string> toks;
            for (const auto &t : v.items) toks.push_back(emit_token(t));
            out += v.list ? fmt::format("  {}: [{}]\n", key, fmt::join(toks, ", ")) : fmt::format("  {}: {}\n", key, toks.front());
        }
    }
    out += fmt::format("output:\n  path: {}\n  format: {}\n", emit_token(m.output_path), to_string(m.format));
    return out;
}

std::string manifest_hash(const ExperimentManifest &m) { return fnv1a_hex(emit_manifest(m)); }

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::BadArguments, "slope fit needs two or more points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<Table1Row> default_table1_rows() {
    std::vector<Table1Row> rows;
    for (int n : {8, 12, 16}) rows.push_back({2.0, 2, n, 1});
    for (int n : {6, 8}) rows.push_back({2.0, 3, n, 1});
    for (int n : {8, 12, 16}) rows.push_back({3.0, 2, n, static_cast<int>(std::ceil(std::pow(n, 0.5)))});
    return rows;
}

double table1_prediction(const Table1Row &row) {
    const double n = row.n, k = row.k;
    if (row.d < row.p) return std::pow(n, row.p - row.d) / k;
    if (row.d == row.p) return std::pow(std::log(n), row.p - 1.0) / k;
    return 1.0 / k;
}

namespace {

// Typed access to manifest parameters.
class ParamReader {
public:
    explicit ParamReader(const ExperimentManifest &m) : m_(m) {}

    bool has(const std::string &key) const { return m_.params.count(key) > 0; }

    std::vector<double> reals(const std::string &key, std::vector<double> fallback = {}) const {
        const auto it = m_.params.find(key);
        if (it == m_.params.end()) return fallback;
        std::vector<double> out;
        for (const auto &tok : it->second.items) {
            const auto dots = tok.find("..");
            if (dots != std::string::npos) {
                const long a = to_long(key, tok.substr(0, dots)), b = to_long(key, tok.substr(dots + 2));
                if (b < a) throw Error(ErrorCode::InvalidSpec, fmt::format("empty range '{}' in '{}'", tok, key));
                for (long v = a; v <= b; ++v) out.push_back(static_cast<double>(v));
            } else {
                out.push_back(to_double(key, tok));
            }
        }
        return out;
    }

    std::vector<int> ints(const std::string &key, std::vector<int> fallback = {}) const {
        if (!has(key)) return fallback;
        std::vector<int> out;
        for (double v : reals(key)) {
            if (v != std::floor(v)) throw Error(ErrorCode::InvalidSpec, fmt::format("'{}' must hold integers", key));
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    double real(const std::string &key, double fallback) const {
        const auto v = reals(key, {fallback});
        if (v.size() != 1) throw Error(ErrorCode::InvalidSpec, fmt::format("'{}' must be a single value", key));
        return v.front();
    }

    std::optional<double> optional_real(const std::string &key) const {
        if (!has(key)) return std::nullopt;
        return real(key, 0.0);
    }

    std::uint64_t count(const std::string &key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const auto &tok = single(key);
        try {
            std::size_t used = 0;
            const auto v = std::stoull(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception &) {
            throw Error(ErrorCode::InvalidSpec, fmt::format("'{}' must be a nonnegative integer", key));
        }
    }

    std::string text(const std::string &key, std::string fallback) const { return has(key) ? single(key) : fallback; }

    std::vector<std::string> texts(const std::string &key, std::vector<std::string> fallback) const {
        const auto it = m_.params.find(key);
        return it == m_.params.end() ? fallback : it->second.items;
    }

    bool flag(const std::string &key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto &tok = single(key);
        if (tok == "true") return true;
        if (tok == "false") return false;
        throw Error(ErrorCode::InvalidSpec, fmt::format("'{}' must be true or false", key));
    }

private:
    const std::string &single(const std::string &key) const {
        const auto &v = m_.params.at(key);
        if (v.list || v.items.size() != 1) throw Error(ErrorCode::InvalidSpec, fmt::format("'{}' must be a scalar", key));
        return v.items.front();
    }
    static double to_double(const std::string &key, const std::string &tok) {
        if (!looks_numeric(tok)) throw Error(ErrorCode::InvalidSpec, fmt::format("'{}' holds non-numeric '{}'", key, tok));
        return std::strtod(tok.c_str(), nullptr);
    }
    static long to_long(const std::string &key, const std::string &tok) {
        const double v = to_double(key, tok);
        if (v != std::floor(v)) throw Error(ErrorCode::InvalidSpec, fmt::format("range bounds in '{}' must be integers", key));
        return static_cast<long>(v);
    }

    const ExperimentManifest &m_;
};

std::string num(double x) { return format_real(x); }

BuildOptions build_opts(const RunOptions &o) { return BuildOptions{o.size_cap}; }

int max_of(const std::vector<int> &v, int fallback) { return v.empty() ? fallback : *std::max_element(v.begin(), v.end()); }

void require_positive(const std::vector<int> &v, const char *key) {
    for (int x : v)
        if (x < 1) throw Error(ErrorCode::InvalidSpec, fmt::format("'{}' entries must be >= 1", key));
}

BoundReport slope_report(const std::string &what, const std::vector<double> &x, const std::vector<double> &computed,
                         const std::vector<double> &formula, Params params) {
    const double a = loglog_slope(x, computed), b = loglog_slope(x, formula);
    params.emplace_back("slope_computed", a);
    params.emplace_back("slope_formula", b);
    auto rep = strict_report(what, std::abs(a - b), 0.15, Side::Upper, std::move(params));
    rep.note = "log-log slope difference against the formula";
    return rep;
}

ExperimentResult run_resistance(const ExperimentManifest &m, const RunOptions &o) {
    const ParamReader pr(m);
    const auto ps = pr.reals("p", {2.0});
    const auto target = pr.text("target", "sphere");
    ExperimentResult res;
    res.table.header = {"p", "r", "resistance", "capacity", "total_current", "iterations", "residual"};
    res.x_column = "r";
    res.y_columns = {"resistance"};
    if (target == "max") {
        if (pr.has("r")) throw Error(ErrorCode::InvalidSpec, "'r' is not consumed when target is max");
        const auto g = build_cayley_graph(*m.graph, build_opts(o));
        res.x_column = "p";
        for (double p : ps) {
            MaxResistanceOptions mo;
            mo.transitive = true;
            const auto mr = max_resistance(g, p, mo);
            res.table.rows.push_back({num(p), "diam", num(mr.value), num(1.0 / mr.value), "", "", ""});
        }
        return res;
    }
    if (target != "sphere") throw Error(ErrorCode::InvalidSpec, "target must be sphere or max");
    auto rs = pr.ints("r", {m.graph->radius});
    std::sort(rs.begin(), rs.end());
    for (int r : rs)
        if (r < 0) throw Error(ErrorCode::InvalidSpec, "'r' entries must be >= 0");
    const auto ball = build_ball(*m.graph, max_of(rs, 0) + 1, build_opts(o));
    for (double p : ps) {
        for (int r : rs) {
            const auto fr = p_resistance(dirichlet_problem(ball, r, DirichletMode::Sphere), p);
            res.table.rows.push_back({num(p), std::to_string(r), num(fr.resistance), num(fr.capacity), num(fr.total_current),
                                      std::to_string(fr.potential.iterations), num(fr.potential.residual)});
            const double rel = std::abs(fr.normalized_energy - fr.normalized_source_value) / fr.normalized_source_value;
            res.reports.push_back(strict_report("current-normalised energy equals source value (relative error)", rel, 1e-8,
                                                Side::Upper, {{"p", p}, {"r", r}}));
        }
    }
    return res;
}

ExperimentResult run_escape(const ExperimentManifest &m, const RunOptions &o) {
    const ParamReader pr(m);
    std::vector<int> fallback;
    for (int r = 1; r <= std::max(1, m.graph->radius); ++r) fallback.push_back(r);
    auto rs = pr.ints("r", fallback);
    require_positive(rs, "r");
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    const auto trials = pr.count("trials", 100000);
    const auto seed = o.seed.value_or(pr.count("seed", 1));
    const bool coupled = pr.flag("coupled", true);
    const bool identity = pr.flag("identity", true);
    const int r_max = max_of(rs, 1);
    const auto ball = build_ball(*m.graph, r_max, build_opts(o));
    WalkOptions wo;
    wo.threads = o.threads;

    std::vector<EscapeEstimate> est;
    if (coupled) {
        const auto all = simulate_escape_coupled(ball, r_max, trials, seed, wo);
        for (int r : rs) est.push_back(all[static_cast<std::size_t>(r - 1)]);
    } else {
        for (int r : rs) est.push_back(simulate_escape(ball, r, trials, seed, wo));
    }
    ExperimentResult res;
    res.table.header = {"spec_hash", "r", "trials", "p_hat", "stderr", "seed"};
    res.x_column = "r";
    res.y_columns = {"p_hat"};
    const auto hash = spec_hash(*m.graph);
    for (const auto &e : est) {
        res.table.rows.push_back({hash, std::to_string(e.r), std::to_string(e.trials), num(e.p_hat), num(e.standard_error),
                                  std::to_string(e.seed)});
        if (identity) {
            const double exact = escape_via_resistance(ball, e.r);
            auto rep = strict_report("|p_hat - 1/(deg R_2)| <= 4 stderr", std::abs(e.p_hat - exact),
                                     4.0 * e.standard_error + 1e-12, Side::Upper,
                                     {{"r", e.r}, {"exact", exact}, {"trials", static_cast<double>(e.trials)}});
            rep.note = "statistical tolerance: 4 standard errors";
            res.reports.push_back(std::move(rep));
        }
    }
    return res;
}

ExperimentResult run_growth(const ExperimentManifest &m, const RunOptions &o) {
    const int radius = m.graph->radius;
    const auto ball = build_ball(*m.graph, radius, build_opts(o));
    const auto prof = growth_profile(ball);
    ExperimentResult res;
    res.table.header = {"r", "beta", "sigma"};
    res.x_column = "r";
    res.y_columns = {"beta", "sigma"};
    for (std::size_t r = 0; r < prof.beta.size(); ++r)
        res.table.rows.push_back({std::to_string(r), std::to_string(prof.beta[r]), std::to_string(prof.sigma[r])});
    res.reports = check_growth_bounds(prof, prof.max_radius());
    for (int r = 1; 4 * r <= prof.max_radius(); ++r)
        if (auto rep = check_four_r(prof, r)) res.reports.push_back(*rep);
    return res;
}

ExperimentResult run_isoperimetry(const ExperimentManifest &m, const RunOptions &o) {
    const ParamReader pr(m);
    const auto mode = pr.text("mode", "theorems");
    ExperimentResult res;
    if (mode == "profile") {
        const auto g = build_cayley_graph(*m.graph, build_opts(o));
        const auto prof = exact_profile(g, pr.flag("connected", false) ? ProfileMode::ConnectedSets : ProfileMode::AllSets);
        res.table.header = {"size", "min_vertex_boundary", "min_edge_boundary", "vertex_witness", "edge_witness"};
        res.x_column = "size";
        res.y_columns = {"min_vertex_boundary", "min_edge_boundary"};
        Table parsed;
        std::istringstream in(profile_csv(prof));
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            res.table.rows.push_back(cells);
        }
        return res;
    }
    if (pr.has("connected")) throw Error(ErrorCode::InvalidSpec, "'connected' is only consumed in profile mode");
    if (mode == "csc") {
        res.reports = verify_csc(build_cayley_graph(*m.graph, build_opts(o)));
    } else if (mode == "theorems") {
        const auto ball = build_ball(*m.graph, m.graph->radius, build_opts(o));
        IsoCheckOptions io;
        io.r = static_cast<int>(pr.count("r", 0));
        io.seed = o.seed.value_or(pr.count("seed", 1));
        for (const auto &name : pr.texts("theorems", {"T6_1", "T6_2", "T6_3", "C6_x", "L_iso_rel_lin", "P_iso_conv"})) {
            auto reps = check_iso_theorems(ball, iso_theorem_from_string(name), io);
            for (auto &r : reps) r.quantity = fmt::format("{}: {}", name, r.quantity);
            res.reports.insert(res.reports.end(), reps.begin(), reps.end());
        }
    } else {
        throw Error(ErrorCode::InvalidSpec, "mode must be theorems, profile or csc");
    }
    res.table = reports_table(res.reports);
    res.x_column = "computed";
    res.y_columns = {"bound"};
    return res;
}

GrowthProfile profile_reaching(const GraphSpec &spec, double need, int start, const RunOptions &o) {
    for (int radius = std::max(1, start);; radius *= 2) {
        const auto ball = build_ball(spec, radius, build_opts(o));
        auto prof = growth_profile(ball);
        if (static_cast<double>(prof.beta.back()) >= need || prof.diameter) return prof;
    }
}

ExperimentResult run_sandwich(const ExperimentManifest &m, const RunOptions &o) {
    const ParamReader pr(m);
    const auto ps = pr.reals("p", {2.0});
    auto rs = pr.ints("r", {m.graph->radius});
    require_positive(rs, "r");
    std::sort(rs.begin(), rs.end());
    const auto strategy = pr.text("strategy", "none");
    if (strategy != "none" && strategy != "profile" && strategy != "exhaustive")
        throw Error(ErrorCode::InvalidSpec, "strategy must be none, profile or exhaustive");
    const int r_max = max_of(rs, 1);
    const auto ball = build_ball(*m.graph, r_max + 1, build_opts(o));
    const auto prof = growth_profile(ball);
    if (prof.diameter && *prof.diameter <= r_max)
        throw Error(ErrorCode::RadiusTooSmall, "sandwich radii must stay below the diameter");
    const double deg = static_cast<double>(ball.ambient_degree);

    std::optional<GrowthProfile> big;
    if (strategy == "profile")
        big = profile_reaching(*m.graph, 2.0 * static_cast<double>(prof.beta[static_cast<std::size_t>(r_max)]), r_max + 1, o);

    ExperimentResult res;
    res.table.header = {"p", "r", "beta_r", "lower_rhs", "computed", "upper_rhs", "computed_over_lower", "computed_over_upper",
                        "nash_williams", "bk_bound"};
    res.x_column = "r";
    res.y_columns = {"lower_rhs", "computed", "upper_rhs", "nash_williams"};
    for (double p : ps) {
        std::vector<double> xs, comp, upper;
        for (int r : rs) {
            const double br = static_cast<double>(prof.beta[static_cast<std::size_t>(r)]);
            TheoremParams tp;
            tp.p = p;
            tp.r = r;
            tp.beta_r = br;
            tp.degree = deg;
            const bool integral = p == std::floor(p);
            const double lo = theorem_rhs(p == 2.0 ? Theorem::T1_8_lower : Theorem::T1_10_lower, tp);
            const double up = theorem_rhs(p == 2.0 ? Theorem::T1_8_upper
                                                   : (integral ? Theorem::T1_10_upper_int : Theorem::T1_10_upper_nonint),
                                          tp);
            const double computed = p_resistance(dirichlet_problem(ball, r, DirichletMode::Sphere), p).resistance;
            const double nw = nash_williams_bound(sphere_cutsets(ball, r + 1), p);
            std::string bk = "";
            Params par{{"p", p}, {"r", r}};
            if (strategy != "none") {
                BkOptions bo;
                bo.degree = deg;
                const auto inner = ball.ball(r);
                if (strategy == "profile") {
                    bo.strategy = BkStrategy::Profile;
                    bo.min_boundary = csc_boundary(*big);
                }
                if (strategy == "profile" || inner.size() <= bo.exhaustive_cap) {
                    const double v = bk_upper_bound_ball(ball.base, inner, ball.center, p, bo).value;
                    bk = num(v);
                    res.reports.push_back(ratio_report("R_p vs Benjamini-Kozma bound", computed, v, Side::Upper, par));
                }
            }
            res.table.rows.push_back({num(p), std::to_string(r), num(br), num(lo), num(computed), num(up), num(computed / lo),
                                      num(computed / up), num(nw), bk});
            res.reports.push_back(strict_report("Nash-Williams bound <= R_p", computed, nw, Side::Lower, par));
            res.reports.push_back(ratio_report("R_p vs lower formula", computed, lo, Side::Lower, par));
            res.reports.push_back(ratio_report("R_p vs upper formula", computed, up, Side::Upper, par));
            if (r >= 2) {
                xs.push_back(r);
                comp.push_back(computed);
                upper.push_back(up);
            }
        }
        if (xs.size() >= 3) res.reports.push_back(slope_report("R_p slope matches upper formula", xs, comp, upper, {{"p", p}}));
    }
    return res;
}

struct Table1Group {
    double p;
    int d;
    std::string rule;
};

ExperimentResult run_table1(const ExperimentManifest &m, const RunOptions &o) {
    const ParamReader pr(m);
    std::vector<Table1Row> rows;
    const bool custom = pr.has("p") || pr.has("d") || pr.has("n") || pr.has("k") || pr.has("eps");
    if (!custom) {
        rows = default_table1_rows();
    } else {
        if (pr.has("k") && pr.has("eps")) throw Error(ErrorCode::InvalidSpec, "give either 'k' or 'eps', not both");
        const auto eps = pr.optional_real("eps");
        for (double p : pr.reals("p", {2.0})) {
            const auto ds = pr.ints("d", eps ? std::vector<int>{static_cast<int>(p) - 1} : std::vector<int>{2});
            for (int d : ds)
                for (int n : pr.ints("n", {8, 12, 16})) {
                    if (eps) {
                        rows.push_back({p, d, n, static_cast<int>(std::ceil(std::pow(n, 1.0 - *eps)))});
                    } else {
                        for (int k : pr.ints("k", {1})) rows.push_back({p, d, n, k});
                    }
                }
        }
    }
    ExperimentResult res;
    res.table.header = {"p", "d", "n", "k", "nash_williams", "exact", "prediction", "sharpness_formula", "nw_over_prediction",
                        "exact_over_prediction"};
    res.x_column = "n";
    res.y_columns = {"nash_williams", "exact", "prediction"};
    std::map<std::tuple<double, int, bool>, std::vector<BoundReport>> groups;
    for (const auto &row : rows) {
        if (row.n < 4 || row.n % 2 || row.d < 1 || row.k < 1)
            throw Error(ErrorCode::InvalidSpec, "table1 rows need even n >= 4, d >= 1, k >= 1");
        const int half = row.n / 2;
        const auto ball = build_ball(GraphSpec::torus_with_fiber(row.n, row.d, row.k), half, build_opts(o));
        const double nw = nash_williams_bound(sphere_cutsets(ball, half), row.p);
        const double exact = p_resistance(dirichlet_problem(ball, half - 1, DirichletMode::Sphere), row.p).resistance;
        const double pred = table1_prediction(row);
        const double formula = sharpness_lower_bound(row.n, row.d, row.k, row.p);
        res.table.rows.push_back({num(row.p), std::to_string(row.d), std::to_string(row.n), std::to_string(row.k), num(nw),
                                  num(exact), num(pred), num(formula), num(nw / pred), num(exact / pred)});
        const Params par{{"p", row.p}, {"d", row.d}, {"n", row.n}, {"k", row.k}};
        res.reports.push_back(strict_report("Nash-Williams bound <= R_p(0 <-> S(0,n/2))", exact, nw, Side::Lower, par));
        auto rep = ratio_report("Nash-Williams bound vs regime prediction", nw, pred, Side::Lower, par);
        groups[{row.p, row.d, row.k == 1}].push_back(rep);
        res.reports.push_back(std::move(rep));
    }
    for (const auto &[key, reps] : groups) {
        if (reps.size() < 2) continue;
        const auto &[p, d, unit_k] = key;
        res.reports.push_back(strict_report("spread of Nash-Williams/prediction across n", ratio_spread(reps), 2.0, Side::Upper,
                                            {{"p", p}, {"d", d}, {"k_is_1", unit_k ? 1.0 : 0.0}}));
    }
    return res;
}

ExperimentResult run_sharpness(const ExperimentManifest &m, const RunOptions &o) {
    const ParamReader pr(m);
    ExperimentResult res;
    res.table.header = {"p", "d", "n", "k", "nash_williams", "formula", "ratio"};
    res.x_column = "n";
    res.y_columns = {"nash_williams", "formula"};
    for (double p : pr.reals("p", {2.0}))
        for (int d : pr.ints("d", {2}))
            for (int k : pr.ints("k", {1}))
                for (int n : pr.ints("n", {8, 12, 16})) {
                    if (n < 4 || n % 2) throw Error(ErrorCode::InvalidSpec, "n must be even and >= 4");
                    const auto ball = build_ball(GraphSpec::torus_with_fiber(n, d, k), n / 2, build_opts(o));
                    const double nw = nash_williams_bound(sphere_cutsets(ball, n / 2), p);
                    const double formula = sharpness_lower_bound(n, d, k, p);
                    res.table.rows.push_back({num(p), std::to_string(d), std::to_string(n), std::to_string(k), num(nw),
                                              num(formula), num(nw / formula)});
                    res.reports.push_back(ratio_report("Nash-Williams on sphere cutsets vs cutset-growth formula", nw, formula,
                                                       Side::Lower, {{"p", p}, {"d", d}, {"n", n}, {"k", k}}));
                }
    return res;
}

ExperimentResult run_var_converse(const ExperimentManifest &m, const RunOptions &o) {
    const ParamReader pr(m);
    const int n = static_cast<int>(pr.count("n", 8));
    auto rs = pr.ints("r", {2 * n, 4 * n, 8 * n});
    std::sort(rs.begin(), rs.end());
    for (int r : rs)
        if (r <= n) throw Error(ErrorCode::InvalidSpec, "'r' entries must exceed n");
    if (n < 1) throw Error(ErrorCode::InvalidSpec, "'n' must be >= 1");
    const auto ball = build_ball(*m.graph, max_of(rs, n + 1), build_opts(o));
    const auto prof = growth_profile(ball);
    const double deg = static_cast<double>(ball.ambient_degree);
    const double bn = static_cast<double>(prof.beta[static_cast<std::size_t>(n)]);
    ExperimentResult res;
    res.table.header = {"n", "r", "beta_n", "computed", "rhs", "computed_over_rhs", "log_r_over_n", "computed_over_log",
                        "nash_williams"};
    res.x_column = "r";
    res.y_columns = {"computed", "rhs", "nash_williams"};
    std::vector<double> xs, comp, rhs_v;
    for (int r : rs) {
        const double computed = p_resistance(sphere_to_sphere_problem(ball, n, r), 2.0).resistance;
        TheoremParams tp;
        tp.n = n;
        tp.r = r;
        tp.beta_n = bn;
        tp.degree = deg;
        const double rhs = theorem_rhs(Theorem::T_var_converse, tp);
        std::vector<std::vector<WeightedEdge>> cuts;
        for (int i = n; i < r; ++i) {
            std::vector<WeightedEdge> cut;
            for (VertexId v : ball.sphere(i))
                for (const auto &nb : ball.base.neighbors(v))
                    if (ball.layer[nb.id] == i + 1) cut.push_back({v, nb.id, nb.multiplicity});
            cuts.push_back(std::move(cut));
        }
        const double nw = nash_williams_bound(make_cutset_family(ball.base, ball.sphere(n), ball.sphere(r), std::move(cuts)), 2.0);
        const double lg = std::log(static_cast<double>(r) / n);
        res.table.rows.push_back({std::to_string(n), std::to_string(r), num(bn), num(computed), num(rhs), num(computed / rhs),
                                  num(lg), num(computed / lg), num(nw)});
        const Params par{{"n", n}, {"r", r}};
        res.reports.push_back(strict_report("Nash-Williams bound <= R_2(S(n) <-> S(r))", computed, nw, Side::Lower, par));
        res.reports.push_back(ratio_report("R_2(S(n) <-> S(r)) vs n^2 log(r/n)/(deg beta(n))", computed, rhs, Side::Lower, par));
        xs.push_back(r);
        comp.push_back(computed);
        rhs_v.push_back(rhs);
    }
    if (xs.size() >= 3) res.reports.push_back(slope_report("R_2 slope matches log(r/n) growth", xs, comp, rhs_v, {{"n", n}}));
    return res;
}

} // namespace

ExperimentResult run_experiment(const ExperimentManifest &m, const RunOptions &o) {
    validate_manifest(m);
    switch (m.experiment) {
    case ExperimentKind::Resistance: return run_resistance(m, o);
    case ExperimentKind::Escape: return run_escape(m, o);
    case ExperimentKind::Growth: return run_growth(m, o);
    case ExperimentKind::Isoperimetry: return run_isoperimetry(m, o);
    case ExperimentKind::Sandwich: return run_sandwich(m, o);
    case ExperimentKind::Table1: return run_table1(m, o);
    case ExperimentKind::SharpnessNw: return run_sharpness(m, o);
    case ExperimentKind::VarConverse: return run_var_converse(m, o);
    }
    throw Error(ErrorCode::BadArguments, "unknown experiment");
}

namespace {

std::string yaml_scalar(const std::string &s) {
    if (s.empty()) return "\"\"";
    return emit_token(s);
}

} // namespace

std::string emit_result(const ExperimentResult &r, OutputFormat format, const ExperimentManifest &m) {
    const auto hash = manifest_hash(m);
    switch (format) {
    case OutputFormat::Csv: return to_csv(r.table);
    case OutputFormat::StructuredText: {
        std::string out = fmt::format("experiment: {}\nmanifest_hash: {}\ntool_version: {}\nrng: {}\ncolumns: [{}]\nrows:\n",
                                      to_string(m.experiment), hash, PRESIST_VERSION, CounterRng::kName,
                                      fmt::join(r.table.header, ", "));
        if (r.table.rows.empty()) out += "  []\n";
        for (const auto &row : r.table.rows) {
            std::vector<std::string> cells;
            for (const auto &c : row) cells.push_back(yaml_scalar(c));
            out += fmt::format("  - [{}]\n", fmt::join(cells, ", "));
        }
        return out + reports_summary(r.reports);
    }
    case OutputFormat::Plotdata: {
        std::string out = fmt::format("# experiment {} manifest {} version {}\n", to_string(m.experiment), hash, PRESIST_VERSION);
        const auto col = [&](const std::string &name) -> std::optional<std::size_t> {
            const auto it = std::find(r.table.header.begin(), r.table.header.end(), name);
            if (it == r.table.header.end()) return std::nullopt;
            return static_cast<std::size_t>(it - r.table.header.begin());
        };
        const auto xc = col(r.x_column);
        for (const auto &y : r.y_columns) {
            const auto yc = col(y);
            if (!xc || !yc) continue;
            out += fmt::format("\n# series {} vs {}\n", y, r.x_column);
            for (const auto &row : r.table.rows)
                if (!row[*yc].empty()) out += fmt::format("{} {}\n", row[*xc], row[*yc]);
        }
        return out;
    }
    }
    return {};
}

std::string run_record(const ExperimentResult &r, const ExperimentManifest &m) {
    const bool ok = all_pass(r.reports);
    return fmt::format("manifest_hash: {}\ntool_version: {}\nrng: {}\nexperiment: {}\nrows: {}\nreports: {}\nstatus: {}\nexit_status: {}\n",
                       manifest_hash(m), PRESIST_VERSION, CounterRng::kName, to_string(m.experiment), r.table.rows.size(),
                       r.reports.size(), ok ? "PASS" : "FAIL", ok ? 0 : 1);
}

std::string error_record(const std::string &code, const std::string &message, const std::optional<ExperimentManifest> &m) {
    std::string out = fmt::format("error:\n  code: {}\n  message: {}\n  tool_version: {}\n", code, yaml_scalar(message), PRESIST_VERSION);
    if (m) out += fmt::format("  manifest_hash: {}\n", manifest_hash(*m));
    return out;
}

RunOutcome run(const ExperimentManifest &m, const RunOptions &opts, const std::optional<std::string> &out_dir,
               std::optional<OutputFormat> format) {
    const auto result = run_experiment(m, opts);
    const auto fmt_used = format.value_or(m.format);
    const std::filesystem::path dir = out_dir.value_or(m.output_path);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
    RunOutcome outcome;
    auto write = [&](const std::string &name, const std::string &content) {
        const auto path = dir / name;
        std::ofstream f(path, std::ios::binary);
        f << content;
        if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        outcome.files.push_back(path.string());
    };
    write(fmt::format("results.{}", file_extension(fmt_used)), emit_result(result, fmt_used, m));
    write("manifest.yaml", emit_manifest(m));
    write("run.yaml", run_record(result, m));
    outcome.exit_status = all_pass(result.reports) ? 0 : 1;
    return outcome;
}

} // namespace presist
