#include "presist/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <iterator>
#include <cmath>
#include <limits>

namespace presist {

std::string_view to_string(Side s) noexcept { return s == Side::Lower ? "lower" : "upper"; }

std::string_view to_string(Status s) noexcept {
    switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Informational: return "INFO";
    }
    return "?";
}

namespace {

double safe_ratio(double computed, double bound) {
    if (bound == 0.0) return computed == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return computed / bound;
}

} // namespace

BoundReport strict_report(std::string quantity, double computed, double bound, Side side, Params params) {
    BoundReport r{std::move(quantity), computed, bound, side, safe_ratio(computed, bound), Status::Fail, std::move(params), {}};
    const bool ok = side == Side::Lower ? bound <= computed + kReportSlack * std::abs(computed)
                                        : computed <= bound + kReportSlack * std::abs(bound);
    r.status = ok ? Status::Pass : Status::Fail;
    return r;
}

BoundReport ratio_report(std::string quantity, double computed, double bound, Side side, Params params) {
    return {std::move(quantity), computed, bound, side, safe_ratio(computed, bound), Status::Informational, std::move(params), {}};
}

bool all_pass(std::span<const BoundReport> reports) noexcept {
    return std::none_of(reports.begin(), reports.end(), [](const auto &r) { return r.status == Status::Fail; });
}

double ratio_spread(std::span<const BoundReport> reports) {
    if (reports.empty()) return 1.0;
    auto [lo, hi] = std::minmax_element(reports.begin(), reports.end(),
                                        [](const auto &a, const auto &b) { return a.ratio < b.ratio; });
    return hi->ratio / lo->ratio;
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{}", x);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string to_csv(const Table &t) {
    std::string out;
    auto line = [&](const std::vector<std::string> &fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(fields[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto &row : t.rows) line(row);
    return out;
}

namespace {

std::string params_text(const Params &params) {
    std::string s;
    for (const auto &[k, v] : params) {
        if (!s.empty()) s += ';';
        s += k + '=' + format_real(v);
    }
    return s;
}

} // namespace

Table reports_table(std::span<const BoundReport> reports) {
    Table t{{"quantity", "side", "computed", "bound", "ratio", "status", "params"}, {}};
    for (const auto &r : reports)
        t.rows.push_back({r.quantity, std::string(to_string(r.side)), format_real(r.computed), format_real(r.bound),
                          format_real(r.ratio), std::string(to_string(r.status)), params_text(r.params)});
    return t;
}

std::string reports_summary(std::span<const BoundReport> reports) {
    std::size_t pass = 0, fail = 0, info = 0;
    std::string body;
    for (const auto &r : reports) {
        pass += r.status == Status::Pass;
        fail += r.status == Status::Fail;
        info += r.status == Status::Informational;
        body += fmt::format("  - quantity: \"{}\"\n    side: {}\n    computed: {}\n    bound: {}\n    ratio: {}\n    status: {}\n",
                            r.quantity, to_string(r.side), format_real(r.computed), format_real(r.bound),
                            format_real(r.ratio), to_string(r.status));
        if (!r.params.empty()) {
            body += "    params: {";
            for (std::size_t i = 0; i < r.params.size(); ++i)
                body += fmt::format("{}{}: {}", i ? ", " : "", r.params[i].first, format_real(r.params[i].second));
            body += "}\n";
        }
        if (!r.note.empty()) body += fmt::format("    note: \"{}\"\n", r.note);
    }
    std::vector<BoundReport> ratios;
    std::copy_if(reports.begin(), reports.end(), std::back_inserter(ratios),
                 [](const auto &r) { return r.status == Status::Informational; });
    const std::string spread = ratios.empty() ? "" : fmt::format("  ratio_spread: {}\n", format_real(ratio_spread(ratios)));
    return fmt::format("summary:\n  reports: {}\n  pass: {}\n  fail: {}\n  informational: {}\n{}"
                       "  status: {}\nreports:\n{}",
                       reports.size(), pass, fail, info, spread, fail ? "FAIL" : "PASS",
                       reports.empty() ? std::string("  []\n") : body);
}

} // namespace presist
