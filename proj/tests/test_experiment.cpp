#include <presist/error.hpp>
#include <presist/experiment.hpp>
#include <presist/spec_io.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace presist;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("presist_test_" + name);
    fs::remove_all(dir);
    return dir;
}

const char *kEscape = R"(experiment: escape
graph:
  family: torus_product
  factors: [20]
  generators: [box]
  radius: 9
params:
  r: 1..9
  trials: 100000
  seed: 7
output:
  path: out/escape
  format: csv
)";

std::vector<std::vector<std::string>> csv_rows(const std::string &csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

ErrorCode code_of(const std::string &text) {
    try {
        parse_manifest(text);
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "manifest accepted:\n" << text;
    return ErrorCode::IoError;
}

} // namespace

TEST(Manifest, RoundTrip) {
    const auto m = parse_manifest(kEscape);
    EXPECT_EQ(m.experiment, ExperimentKind::Escape);
    EXPECT_EQ(m.params.at("r").items, (std::vector<std::string>{"1..9"}));
    const auto text = emit_manifest(m);
    const auto again = parse_manifest(text);
    EXPECT_EQ(emit_manifest(again), text);
    EXPECT_EQ(again.graph, m.graph);
    EXPECT_EQ(again.params.size(), m.params.size());
    EXPECT_EQ(manifest_hash(again), manifest_hash(m));

    ExperimentManifest t;
    t.experiment = ExperimentKind::Table1;
    t.params["p"] = ParamValue{{"2", "3"}, true};
    t.params["eps"] = ParamValue{{"0.5"}, false};
    t.output_path = "a dir/with \"quotes\"";
    t.format = OutputFormat::Plotdata;
    const auto back = parse_manifest(emit_manifest(t));
    EXPECT_EQ(back.output_path, t.output_path);
    EXPECT_EQ(back.format, OutputFormat::Plotdata);
    EXPECT_EQ(back.params.at("p").items, t.params.at("p").items);
    EXPECT_TRUE(back.params.at("p").list);
    EXPECT_EQ(emit_manifest(back), emit_manifest(t));
}

TEST(Manifest, RejectsUnknownAndUnconsumedKeys) {
    EXPECT_EQ(code_of(std::string(kEscape) + "colour: red\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("experiment: growth\ngraph: {family: torus_product, factors: [5], generators: [box]}\nparams: {p: 2}\n"),
              ErrorCode::InvalidSpec);
    EXPECT_EQ(code_of("experiment: table1\ngraph: {family: torus_product, factors: [5], generators: [box]}\n"),
              ErrorCode::InvalidSpec);
    EXPECT_EQ(code_of("experiment: resistance\n"), ErrorCode::InvalidSpec);
    EXPECT_EQ(code_of("experiment: teleport\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("experiment: table1\noutput: {format: pdf}\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("experiment: table1\noutput: {path: x, colour: red}\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("- just\n- a list\n"), ErrorCode::ParseError);
}

TEST(Manifest, AllowedParamsPerExperiment) {
    const auto a = allowed_params(ExperimentKind::Escape);
    EXPECT_NE(std::find(a.begin(), a.end(), "trials"), a.end());
    EXPECT_TRUE(allowed_params(ExperimentKind::Growth).empty());
}

TEST(Run, EscapeOnCycle) {
    const auto m = parse_manifest(kEscape);
    const auto res = run_experiment(m);
    ASSERT_EQ(res.table.rows.size(), 9u);
    const auto rows = csv_rows(emit_result(res, OutputFormat::Csv, m));
    ASSERT_EQ(rows.size(), 10u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"spec_hash", "r", "trials", "p_hat", "stderr", "seed"}));
    EXPECT_NEAR(std::stod(rows[5][3]), 0.2, 4 * std::stod(rows[5][4]));
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_LE(std::stod(rows[i][3]), std::stod(rows[i - 1][3]));
    EXPECT_TRUE(all_pass(res.reports));
}

TEST(Run, GrowthOnCubicLattice) {
    ExperimentManifest m;
    m.experiment = ExperimentKind::Growth;
    m.graph = GraphSpec::lattice(3, 10);
    const auto res = run_experiment(m);
    ASSERT_EQ(res.table.rows.size(), 11u);
    for (std::size_t r = 0; r <= 10; ++r) EXPECT_EQ(std::stoull(res.table.rows[r][1]), (2 * r + 1) * (2 * r + 1) * (2 * r + 1));
    EXPECT_TRUE(all_pass(res.reports));
}

TEST(Run, SandwichRowsSortedByRadius) {
    ExperimentManifest m;
    m.experiment = ExperimentKind::Sandwich;
    m.graph = GraphSpec::lattice(2, 20);
    m.params["r"] = ParamValue{{"20", "2..19"}, true};
    const auto res = run_experiment(m);
    ASSERT_EQ(res.table.rows.size(), 19u);
    for (std::size_t i = 0; i < 19; ++i) EXPECT_EQ(res.table.rows[i][1], std::to_string(i + 2));
    // lower <= computed up to constants: both ratios stay within a bounded band
    double lo = 1e300, hi = 0;
    for (const auto &row : res.table.rows) {
        const double over_upper = std::stod(row[7]);
        lo = std::min(lo, over_upper);
        hi = std::max(hi, over_upper);
        EXPECT_GE(std::stod(row[6]), 1.0);
        EXPECT_LE(std::stod(row[8]), std::stod(row[4]));
    }
    EXPECT_LE(hi / lo, 3.0);
}

TEST(Run, ResistanceSweepAndMaxTarget) {
    ExperimentManifest m;
    m.experiment = ExperimentKind::Resistance;
    m.graph = GraphSpec::cycle(20, 9);
    m.params["p"] = ParamValue{{"2", "3"}, true};
    m.params["r"] = ParamValue{{"4"}, false};
    const auto res = run_experiment(m);
    ASSERT_EQ(res.table.rows.size(), 2u);
    EXPECT_NEAR(std::stod(res.table.rows[0][2]), 2.5, 1e-12);
    EXPECT_NEAR(std::stod(res.table.rows[1][2]), 12.5, 1e-8);
    m.params.erase("r");
    m.params["target"] = ParamValue{{"max"}, false};
    EXPECT_NEAR(std::stod(run_experiment(m).table.rows[0][2]), 5.0, 1e-9);
}

TEST(Run, Table1DefaultsAndPrediction) {
    EXPECT_EQ(default_table1_rows().size(), 8u);
    EXPECT_DOUBLE_EQ(table1_prediction({2.0, 2, 8, 1}), std::log(8.0));
    EXPECT_DOUBLE_EQ(table1_prediction({2.0, 3, 8, 1}), 1.0);
    EXPECT_DOUBLE_EQ(table1_prediction({3.0, 2, 16, 4}), 4.0);
    ExperimentManifest m;
    m.experiment = ExperimentKind::Table1;
    m.params["p"] = ParamValue{{"3"}, false};
    m.params["n"] = ParamValue{{"8", "12"}, true};
    m.params["eps"] = ParamValue{{"0.5"}, false};
    const auto res = run_experiment(m);
    ASSERT_EQ(res.table.rows.size(), 2u);
    EXPECT_EQ(res.table.rows[0][1], "2");
    EXPECT_EQ(res.table.rows[0][3], "3");
    EXPECT_EQ(res.table.rows[1][3], "4");
    for (const auto &row : res.table.rows) EXPECT_LE(std::stod(row[4]), std::stod(row[5]));
}

TEST(Run, SlopeFit) {
    std::vector<double> x{2, 4, 8, 16}, y;
    for (double v : x) y.push_back(3 * std::pow(v, 1.7));
    EXPECT_NEAR(loglog_slope(x, y), 1.7, 1e-12);
    EXPECT_THROW(loglog_slope({1}, {1}), Error);
}

TEST(Run, ArtifactsAreByteStable) {
    const auto m = parse_manifest(kEscape);
    const auto a = scratch("a"), b = scratch("b");
    RunOptions one, three;
    three.threads = 3;
    const auto ra = run(m, one, a.string());
    const auto rb = run(m, three, b.string());
    EXPECT_EQ(ra.exit_status, 0);
    ASSERT_EQ(ra.files.size(), 3u);
    for (const auto *name : {"results.csv", "manifest.yaml", "run.yaml"}) EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    EXPECT_NE(slurp(a / "run.yaml").find("manifest_hash: " + manifest_hash(m)), std::string::npos);
    EXPECT_NE(slurp(a / "run.yaml").find(std::string("tool_version: ") + PRESIST_VERSION), std::string::npos);
    EXPECT_EQ(parse_manifest(slurp(a / "manifest.yaml")).graph, m.graph);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Run, StructuredTextAndPlotdataEmbedProvenance) {
    const auto m = parse_manifest(kEscape);
    const auto res = run_experiment(m);
    const auto st = emit_result(res, OutputFormat::StructuredText, m);
    EXPECT_NE(st.find("manifest_hash: " + manifest_hash(m)), std::string::npos);
    EXPECT_NE(st.find("status: PASS"), std::string::npos);
    const auto pd = emit_result(res, OutputFormat::Plotdata, m);
    EXPECT_EQ(pd.rfind("# experiment escape manifest " + manifest_hash(m), 0), 0u);
    EXPECT_NE(pd.find("# series p_hat vs r\n1 1\n2 "), std::string::npos);
    EXPECT_EQ(file_extension(OutputFormat::Plotdata), "dat");
}

TEST(Run, FailingReportGivesNonzeroExit) {
    ExperimentManifest m;
    m.experiment = ExperimentKind::VarConverse;
    m.graph = GraphSpec::line_times_torus(5, 2, 64);
    const auto dir = scratch("vc");
    const auto out = run(m, {}, dir.string());
    EXPECT_EQ(out.exit_status, 1);
    EXPECT_NE(slurp(dir / "run.yaml").find("status: FAIL"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Run, ErrorRecord) {
    const auto rec = error_record("NonConvergence", "solver: stalled", std::nullopt);
    EXPECT_EQ(rec.rfind("error:\n  code: NonConvergence\n  message: \"solver: stalled\"\n", 0), 0u);
}

TEST(Run, RejectsBadParameterValues) {
    ExperimentManifest m;
    m.experiment = ExperimentKind::Escape;
    m.graph = GraphSpec::cycle(10, 4);
    m.params["r"] = ParamValue{{"x"}, false};
    EXPECT_THROW(run_experiment(m), Error);
    m.params["r"] = ParamValue{{"5..2"}, false};
    EXPECT_THROW(run_experiment(m), Error);
    m.params["r"] = ParamValue{{"9"}, false};
    EXPECT_THROW(run_experiment(m), Error);
}
