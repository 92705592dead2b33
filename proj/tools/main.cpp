#include <presist/error.hpp>
#include <presist/experiment.hpp>
#include <presist/graph.hpp>
#include <presist/spec_io.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace presist;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    unsigned threads = 1;
    std::size_t size_cap = kDefaultSizeCap;
};

ParamValue list_param(const std::vector<std::string> &items) { return ParamValue{items, items.size() != 1}; }

void set_list(ExperimentManifest &m, const std::string &key, const std::vector<std::string> &items) {
    if (!items.empty()) m.params[key] = list_param(items);
}

void set_scalar(ExperimentManifest &m, const std::string &key, const std::optional<std::string> &value) {
    if (value) m.params[key] = ParamValue{{*value}, false};
}

int execute(const ExperimentManifest &m, const Globals &g) {
    RunOptions opts;
    opts.threads = g.threads;
    opts.seed = g.seed;
    opts.size_cap = g.size_cap;
    std::optional<OutputFormat> fmt_override;
    if (g.format) fmt_override = format_from_string(*g.format);
    const auto outcome = run(m, opts, g.out, fmt_override);
    for (const auto &f : outcome.files) std::cout << f << '\n';
    return outcome.exit_status;
}

int build_summary(const std::string &spec_path, const Globals &g) {
    const auto spec = load_spec(spec_path);
    const BuildOptions bo{g.size_cap};
    std::string out = fmt::format("spec_hash: {}\nfamily: {}\n", spec_hash(spec), to_string(spec.family));
    if (spec.has_infinite_factor()) {
        const auto ball = build_ball(spec, spec.radius, bo);
        const auto prof = growth_profile(ball);
        out += fmt::format("kind: ball\nradius: {}\nvertices: {}\nedges: {}\ndegree: {}\nbeta: [{}]\n", spec.radius,
                           ball.base.size(), ball.base.edge_count(), ball.ambient_degree, fmt::join(prof.beta, ", "));
    } else {
        const auto graph = build_cayley_graph(spec, bo);
        const auto prof = growth_profile(graph, 0);
        out += fmt::format("kind: cayley\nvertices: {}\nedges: {}\ndegree: {}\ndiameter: {}\nbeta: [{}]\n",
                           graph.size(), graph.edge_count(), graph.max_degree(), prof.max_radius(),
                           fmt::join(prof.beta, ", "));
    }
    std::cout << out;
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"p-resistance and isoperimetry toolkit for vertex-transitive graphs"};
    app.set_version_flag("--version", PRESIST_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "RNG seed override")->envname("PRESIST_SEED");
    app.add_option("--out", g.out, "Artifact directory")->envname("PRESIST_OUT");
    app.add_option("--format", g.format, "csv | structured-text | plotdata")
        ->envname("PRESIST_FORMAT")
        ->check(CLI::IsMember({"csv", "structured-text", "plotdata"}));
    app.add_option("--threads", g.threads, "Worker threads for Monte Carlo")->envname("PRESIST_THREADS")->check(CLI::PositiveNumber);
    app.add_option("--size-cap", g.size_cap, "Vertex cap for graph construction")->envname("PRESIST_SIZE_CAP");

    std::optional<ExperimentManifest> manifest;
    std::function<int()> action;
    std::string spec_path;

    auto *build = app.add_subcommand("build", "Build a graph from a spec and print a summary");
    build->add_option("spec", spec_path, "Graph spec file")->required()->check(CLI::ExistingFile);
    build->callback([&] { action = [&] { return build_summary(spec_path, g); }; });

    std::vector<std::string> ps, rs, thms;
    std::optional<std::string> target, trials, seed_param, strategy, mode, coupled, iso_r, connected, n_param;

    auto graph_manifest = [&](ExperimentKind kind) {
        ExperimentManifest m;
        m.experiment = kind;
        m.graph = load_spec(spec_path);
        return m;
    };

    auto *resist = app.add_subcommand("resist", "p-resistance from the centre to spheres");
    resist->add_option("spec", spec_path)->required()->check(CLI::ExistingFile);
    resist->add_option("-p,--p", ps, "Exponents");
    resist->add_option("-r,--r", rs, "Radii (ranges a..b allowed)");
    resist->add_option("--target", target)->check(CLI::IsMember({"sphere", "max"}));
    resist->callback([&] {
        auto m = graph_manifest(ExperimentKind::Resistance);
        set_list(m, "p", ps);
        set_list(m, "r", rs);
        set_scalar(m, "target", target);
        manifest = m;
    });

    auto *escape = app.add_subcommand("escape", "Monte Carlo escape probabilities");
    escape->add_option("spec", spec_path)->required()->check(CLI::ExistingFile);
    escape->add_option("-r,--r", rs, "Radii");
    escape->add_option("--trials", trials);
    escape->add_option("--coupled", coupled)->check(CLI::IsMember({"true", "false"}));
    escape->callback([&] {
        auto m = graph_manifest(ExperimentKind::Escape);
        set_list(m, "r", rs);
        set_scalar(m, "trials", trials);
        set_scalar(m, "coupled", coupled);
        manifest = m;
    });

    auto *growth = app.add_subcommand("growth", "Ball and sphere sizes with growth-bound checks");
    growth->add_option("spec", spec_path)->required()->check(CLI::ExistingFile);
    growth->callback([&] { manifest = graph_manifest(ExperimentKind::Growth); });

    auto *iso = app.add_subcommand("iso", "Isoperimetric profiles and theorem checks");
    iso->add_option("spec", spec_path)->required()->check(CLI::ExistingFile);
    iso->add_option("--mode", mode)->check(CLI::IsMember({"theorems", "profile", "csc"}));
    iso->add_option("--theorems", thms);
    iso->add_option("-r,--r", iso_r);
    iso->add_option("--connected", connected)->check(CLI::IsMember({"true", "false"}));
    iso->callback([&] {
        auto m = graph_manifest(ExperimentKind::Isoperimetry);
        set_scalar(m, "mode", mode);
        set_list(m, "theorems", thms);
        set_scalar(m, "r", iso_r);
        set_scalar(m, "connected", connected);
        manifest = m;
    });

    auto *verify = app.add_subcommand("verify", "Resistance sandwich: lower formula, solver, upper formula, cutset bounds");
    verify->add_option("spec", spec_path)->required()->check(CLI::ExistingFile);
    verify->add_option("-p,--p", ps);
    verify->add_option("-r,--r", rs);
    verify->add_option("--strategy", strategy)->check(CLI::IsMember({"none", "profile", "exhaustive"}));
    verify->callback([&] {
        auto m = graph_manifest(ExperimentKind::Sandwich);
        set_list(m, "p", ps);
        set_list(m, "r", rs);
        set_scalar(m, "strategy", strategy);
        manifest = m;
    });

    auto *repro = app.add_subcommand("repro", "Reproduce the sharpness examples");
    repro->require_subcommand(1);
    std::vector<std::string> ds, ns, ks;
    std::optional<std::string> eps;
    auto *t1 = repro->add_subcommand("table1", "Nash-Williams bounds and exact resistances on (Z/nZ)^d + Z/kZ");
    auto *sharp = repro->add_subcommand("sharpness", "Nash-Williams sphere-cutset computation");
    for (auto *sub : {t1, sharp}) {
        sub->add_option("-p,--p", ps);
        sub->add_option("-d,--d", ds);
        sub->add_option("-n,--n", ns);
        sub->add_option("-k,--k", ks);
    }
    t1->add_option("--eps", eps);
    t1->callback([&] {
        ExperimentManifest m;
        m.experiment = ExperimentKind::Table1;
        set_list(m, "p", ps);
        set_list(m, "d", ds);
        set_list(m, "n", ns);
        set_list(m, "k", ks);
        set_scalar(m, "eps", eps);
        manifest = m;
    });
    sharp->callback([&] {
        ExperimentManifest m;
        m.experiment = ExperimentKind::SharpnessNw;
        set_list(m, "p", ps);
        set_list(m, "d", ds);
        set_list(m, "n", ns);
        set_list(m, "k", ks);
        manifest = m;
    });
    auto *vc = repro->add_subcommand("var-converse", "Sphere-to-sphere resistance on Z + (Z/5Z)^2");
    std::optional<std::string> vc_spec;
    vc->add_option("--spec", vc_spec, "Graph spec (defaults to Z + (Z/5Z)^2 with box generators)")->check(CLI::ExistingFile);
    vc->add_option("-n,--n", n_param);
    vc->add_option("-r,--r", rs);
    vc->callback([&] {
        ExperimentManifest m;
        m.experiment = ExperimentKind::VarConverse;
        m.graph = vc_spec ? load_spec(*vc_spec) : GraphSpec::line_times_torus(5, 2, 64);
        set_scalar(m, "n", n_param);
        set_list(m, "r", rs);
        manifest = m;
    });

    std::string manifest_path;
    auto *runc = app.add_subcommand("run", "Run an experiment manifest");
    runc->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);
    runc->callback([&] { manifest = load_manifest(manifest_path); });

    try {
        app.parse(argc, argv);
        if (action) return action();
        validate_manifest(*manifest);
        return execute(*manifest, g);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const Error &e) {
        std::cerr << error_record(std::string(to_string(e.code())), e.what(), manifest);
        return 2;
    } catch (const std::exception &e) {
        std::cerr << error_record("Internal", e.what(), manifest);
        return 2;
    }
}
