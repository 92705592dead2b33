#pragma once

#include "presist/graph.hpp"
#include "presist/report.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace presist {

enum class ExperimentKind { Resistance, Escape, Growth, Isoperimetry, Sandwich, Table1, SharpnessNw, VarConverse };
enum class OutputFormat { Csv, StructuredText, Plotdata };

std::string_view to_string(ExperimentKind k) noexcept;
ExperimentKind experiment_from_string(std::string_view s);
std::string_view to_string(OutputFormat f) noexcept;
OutputFormat format_from_string(std::string_view s);
std::string_view file_extension(OutputFormat f) noexcept;

/// A parameter as written: one scalar token or a list of tokens. Numeric lists accept
/// `a..b` ranges.
struct ParamValue {
    std::vector<std::string> items;
    bool list = false;
    bool operator==(const ParamValue &) const = default;
};

/// Manifest document:
///
///     experiment: sandwich
///     graph:
///       family: torus_product
///       factors: [inf, inf]
///       generators: [box]
///       radius: 0
///     params:
///       p: [2]
///       r: "2..24"
///     output:
///       path: out/sandwich
///       format: csv
///
/// `graph` is omitted for table1 and sharpness_nw, which construct their own families.
struct ExperimentManifest {
    ExperimentKind experiment = ExperimentKind::Resistance;
    std::optional<GraphSpec> graph;
    std::map<std::string, ParamValue> params;
    std::string output_path = "out";
    OutputFormat format = OutputFormat::Csv;
    bool operator==(const ExperimentManifest &) const = default;
};

ExperimentManifest parse_manifest(std::string_view text);
ExperimentManifest load_manifest(const std::string &path);
std::string emit_manifest(const ExperimentManifest &m);
std::string manifest_hash(const ExperimentManifest &m);

/// Keys each experiment consumes; anything else is rejected at validation.
std::vector<std::string_view> allowed_params(ExperimentKind k);
void validate_manifest(const ExperimentManifest &m);

struct RunOptions {
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
    std::size_t size_cap = kDefaultSizeCap;
};

struct ExperimentResult {
    Table table;
    std::string x_column;
    std::vector<std::string> y_columns;
    std::vector<BoundReport> reports;
};

ExperimentResult run_experiment(const ExperimentManifest &m, const RunOptions &opts = {});

/// Deterministic rendering; structured text and plotdata embed the manifest hash and version.
std::string emit_result(const ExperimentResult &r, OutputFormat format, const ExperimentManifest &m);

/// Sidecar record: manifest hash, tool version, generator name, status.
std::string run_record(const ExperimentResult &r, const ExperimentManifest &m);
std::string error_record(const std::string &code, const std::string &message, const std::optional<ExperimentManifest> &m);

struct RunOutcome {
    int exit_status = 0;
    std::vector<std::string> files;
};

/// Runs the manifest and writes `results.<ext>`, `manifest.yaml` and `run.yaml` into the
/// output directory (or `out_dir` when given). Exit status 0 iff no report failed.
RunOutcome run(const ExperimentManifest &m, const RunOptions &opts = {}, const std::optional<std::string> &out_dir = {},
               std::optional<OutputFormat> format = {});

/// Log-log least-squares slope of y against x.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

struct Table1Row {
    double p = 2.0;
    int d = 2;
    int n = 8;
    int k = 1;
};

/// Default table1 rows: (p=2, d=2, k=1, n=8,12,16), (p=2, d=3, k=1, n=6,8) and
/// (p=3, d=2, k=ceil(n^{1/2}), n=8,12,16).
std::vector<Table1Row> default_table1_rows();
/// Regime prediction n^{p-d}/k, (log n)^{p-1}/k or 1/k.
double table1_prediction(const Table1Row &row);

} // namespace presist
