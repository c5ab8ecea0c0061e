#include "gint/io.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gint {

using nlohmann::json;

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::json: return "json";
        case OutputFormat::csv: return "csv";
        case OutputFormat::table: return "table";
    }
    return "json";
}

OutputFormat parse_output_format(const std::string& s) {
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    if (s == "table") return OutputFormat::table;
    throw std::invalid_argument("unknown output format '" + s + "' (expected json|csv|table)");
}

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json to_json(const Vec& v) {
    json j = json::array();
    for (int i = 0; i < v.dim(); ++i) j.push_back(v[i]);
    return j;
}

Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("vector value must be a JSON array");
    if (j.empty()) return Vec();
    Vec v(static_cast<int>(j.size()));
    for (int i = 0; i < v.dim(); ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

namespace {

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

json to_json(const TraceRow& row) {
    return json{{"depth", row.depth},
                {"cells", row.cells},
                {"estimate", to_json(row.estimate)},
                {"gap", opt(row.gap)},
                {"variation", opt(row.variation)},
                {"strong_gap", opt(row.strong_gap)}};
}

TraceRow trace_row_from_json(const json& j) {
    TraceRow row;
    row.depth = j.at("depth").get<int>();
    row.cells = j.at("cells").get<std::size_t>();
    row.estimate = vec_from_json(j.at("estimate"));
    row.gap = opt_from(j, "gap");
    row.variation = opt_from(j, "variation");
    row.strong_gap = opt_from(j, "strong_gap");
    return row;
}

json to_json(const IntegralResult& r) {
    json trace = json::array();
    for (const auto& row : r.trace) trace.push_back(to_json(row));
    return json{{"value", to_json(r.value)},
                {"cauchy_gap", r.cauchy_gap},
                {"depth", r.depth},
                {"converged_depth", r.converged_depth},
                {"cells", r.cells},
                {"converged", r.converged},
                {"stop_reason", r.stop_reason},
                {"tol", r.tol},
                {"discipline", r.discipline},
                {"scheme", r.scheme},
                {"strong_gap_source", r.strong_gap_source},
                {"trace", trace}};
}

IntegralResult integral_result_from_json(const json& j) {
    IntegralResult r;
    r.value = vec_from_json(j.at("value"));
    r.cauchy_gap = j.at("cauchy_gap").get<double>();
    r.depth = j.at("depth").get<int>();
    r.converged_depth = j.at("converged_depth").get<int>();
    r.cells = j.at("cells").get<std::size_t>();
    r.converged = j.at("converged").get<bool>();
    r.stop_reason = j.at("stop_reason").get<std::string>();
    r.tol = j.at("tol").get<double>();
    r.discipline = j.at("discipline").get<std::string>();
    r.scheme = j.at("scheme").get<std::string>();
    r.strong_gap_source = j.value("strong_gap_source", "");
    for (const auto& row : j.at("trace")) r.trace.push_back(trace_row_from_json(row));
    return r;
}

json to_json(const FubiniReport& r) {
    return json{{"double_integral", to_json(r.double_integral)},
                {"iterated_xy", to_json(r.iterated_xy)},
                {"iterated_yx", to_json(r.iterated_yx)},
                {"gap_xy", r.gap_xy},
                {"gap_yx", r.gap_yx},
                {"bound_xy", r.bound_xy},
                {"bound_yx", r.bound_yx},
                {"within_bound", r.within_bound()},
                {"tol_outer", r.tol_outer},
                {"tol_inner", r.tol_inner},
                {"discipline", r.discipline},
                {"z1", r.z1.to_json()},
                {"z2", r.z2.to_json()},
                {"inner_evaluations_xy", r.inner_evaluations_xy},
                {"inner_evaluations_yx", r.inner_evaluations_yx}};
}

FubiniReport fubini_report_from_json(const json& j) {
    FubiniReport r;
    r.double_integral = integral_result_from_json(j.at("double_integral"));
    r.iterated_xy = integral_result_from_json(j.at("iterated_xy"));
    r.iterated_yx = integral_result_from_json(j.at("iterated_yx"));
    r.gap_xy = j.at("gap_xy").get<double>();
    r.gap_yx = j.at("gap_yx").get<double>();
    r.bound_xy = j.at("bound_xy").get<double>();
    r.bound_yx = j.at("bound_yx").get<double>();
    r.tol_outer = j.at("tol_outer").get<double>();
    r.tol_inner = j.at("tol_inner").get<double>();
    r.discipline = j.at("discipline").get<std::string>();
    r.z1 = NullSet::from_json(j.at("z1"));
    r.z2 = NullSet::from_json(j.at("z2"));
    r.inner_evaluations_xy = j.at("inner_evaluations_xy").get<std::size_t>();
    r.inner_evaluations_yx = j.at("inner_evaluations_yx").get<std::size_t>();
    return r;
}

namespace {

int codim_of(const IntegralResult& r) {
    if (r.value.dim() > 0) return r.value.dim();
    return r.trace.empty() ? 1 : r.trace.front().estimate.dim();
}

void csv_header(std::ostream& os, int d, bool with_order) {
    if (with_order) os << "order,";
    os << "depth,cells";
    for (int i = 0; i < d; ++i) os << ",estimate_" << i;
    os << ",gap\n";
}

void csv_rows(std::ostream& os, const IntegralResult& r, const char* order) {
    for (const auto& row : r.trace) {
        if (order) os << order << ',';
        os << row.depth << ',' << row.cells;
        for (int i = 0; i < row.estimate.dim(); ++i) os << ',' << format_double(row.estimate[i]);
        os << ',';
        if (row.gap) os << format_double(*row.gap);
        os << '\n';
    }
}

std::string vec_str(const Vec& v) {
    if (v.dim() == 1) return format_double(v[0]);
    std::string s = "(";
    for (int i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return s + ")";
}

std::string sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << x;
    return os.str();
}

}  // namespace

void write_csv(std::ostream& os, const IntegralResult& r) {
    csv_header(os, codim_of(r), false);
    csv_rows(os, r, nullptr);
}

void write_csv(std::ostream& os, const FubiniReport& r) {
    csv_header(os, codim_of(r.double_integral), true);
    csv_rows(os, r.double_integral, "double");
    csv_rows(os, r.iterated_xy, "xy");
    csv_rows(os, r.iterated_yx, "yx");
}

void write_table(std::ostream& os, const IntegralResult& r) {
    os << "value       " << vec_str(r.value) << '\n'
       << "converged   " << (r.converged ? "yes" : "no") << " (" << r.stop_reason << ")\n"
       << "depth       " << r.depth << "  converged_depth " << r.converged_depth << "  cells " << r.cells << '\n'
       << "cauchy_gap  " << sci(r.cauchy_gap) << "  tol " << sci(r.tol) << '\n'
       << "discipline  " << r.discipline << "  scheme " << r.scheme << '\n';
    os << std::setw(5) << "depth" << std::setw(12) << "cells" << std::setw(26) << "estimate" << std::setw(12) << "gap";
    const bool var = !r.trace.empty() && r.trace.back().variation.has_value();
    const bool sg = !r.trace.empty() && r.trace.back().strong_gap.has_value();
    if (var) os << std::setw(12) << "variation";
    if (sg) os << std::setw(12) << "strong_gap";
    os << '\n';
    for (const auto& row : r.trace) {
        os << std::setw(5) << row.depth << std::setw(12) << row.cells << std::setw(26) << vec_str(row.estimate)
           << std::setw(12) << (row.gap ? sci(*row.gap) : "-");
        if (var) os << std::setw(12) << (row.variation ? sci(*row.variation) : "-");
        if (sg) os << std::setw(12) << (row.strong_gap ? sci(*row.strong_gap) : "-");
        os << '\n';
    }
}

void write_table(std::ostream& os, const FubiniReport& r) {
    os << "double      " << vec_str(r.double_integral.value) << "  (depth " << r.double_integral.depth << ", "
       << r.double_integral.stop_reason << ")\n"
       << "iterated xy " << vec_str(r.iterated_xy.value) << "  gap " << sci(r.gap_xy) << "  bound "
       << sci(r.bound_xy) << "  inner evaluations " << r.inner_evaluations_xy << '\n'
       << "iterated yx " << vec_str(r.iterated_yx.value) << "  gap " << sci(r.gap_yx) << "  bound "
       << sci(r.bound_yx) << "  inner evaluations " << r.inner_evaluations_yx << '\n'
       << "Z1          " << r.z1.describe() << "\nZ2          " << r.z2.describe() << '\n'
       << "discipline  " << r.discipline << "  tol_outer " << sci(r.tol_outer) << "  tol_inner "
       << sci(r.tol_inner) << '\n'
       << "within bound " << (r.within_bound() ? "yes" : "no") << '\n';
}

}  // namespace gint
