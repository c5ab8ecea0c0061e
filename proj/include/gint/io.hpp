#pragma once

// JSON, CSV and plain-table encodings of results and reports.

#include <ostream>
#include <string>

#include <json.hpp>

#include "gint/fubini.hpp"
#include "gint/integrator.hpp"

namespace gint {

enum class OutputFormat { json, csv, table };

std::string to_string(OutputFormat f);
OutputFormat parse_output_format(const std::string& s);

nlohmann::json to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TraceRow& row);
TraceRow trace_row_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IntegralResult& r);
IntegralResult integral_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FubiniReport& r);
FubiniReport fubini_report_from_json(const nlohmann::json& j);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

/// depth,cells,estimate_0..estimate_{d-1},gap; the gap is empty on the first row.
void write_csv(std::ostream& os, const IntegralResult& r);
/// Both iterated traces, with a leading order column (double, xy, yx).
void write_csv(std::ostream& os, const FubiniReport& r);

void write_table(std::ostream& os, const IntegralResult& r);
void write_table(std::ostream& os, const FubiniReport& r);

}  // namespace gint
