#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace presist {

enum class Side { Lower, Upper };
enum class Status { Pass, Fail, Informational };

std::string_view to_string(Side s) noexcept;
std::string_view to_string(Status s) noexcept;

using Params = std::vector<std::pair<std::string, double>>;

/// A computed quantity paired with a formula value. For Lower, the formula claims
/// bound <= computed; for Upper, computed <= bound. Informational reports carry a
/// formula with an unknown implied constant and only record the ratio.
struct BoundReport {
    std::string quantity;
    double computed = 0.0;
    double bound = 0.0;
    Side side = Side::Upper;
    double ratio = 0.0; // computed / bound
    Status status = Status::Informational;
    Params params;
    std::string note;
};

inline constexpr double kReportSlack = 1e-9;

/// Strict report: Pass iff the inequality holds up to a relative slack of 1e-9.
BoundReport strict_report(std::string quantity, double computed, double bound, Side side, Params params = {});
/// Ratio-only report for bounds holding up to an unspecified constant.
BoundReport ratio_report(std::string quantity, double computed, double bound, Side side, Params params = {});

bool all_pass(std::span<const BoundReport> reports) noexcept;

/// max/min of the ratios of the given reports (1 when empty).
double ratio_spread(std::span<const BoundReport> reports);

/// Shortest round-trip decimal form of a double; deterministic across runs.
std::string format_real(double x);

/// Minimal RFC 4180 table.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string csv_escape(std::string_view field);
std::string to_csv(const Table &t);

Table reports_table(std::span<const BoundReport> reports);
/// Structured-text (YAML) summary: one entry per report plus pass/fail counts.
std::string reports_summary(std::span<const BoundReport> reports);

} // namespace presist
