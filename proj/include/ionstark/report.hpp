#pragma once

// Report plumbing shared by all commands: a JSON document with a scenario
// echo, scalar results, an optional row table, warnings and a provenance
// block, rendered as human text, CSV or JSON.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ionstark/atomic_data.hpp"

namespace ionstark {

using ReportJson = nlohmann::ordered_json;

struct Report {
    ReportJson doc;
};

enum class ReportFormat { human, csv, json };
ReportFormat report_format_from_string(const std::string& s);

Report make_report(const std::string& command);

// Tool version plus the species' data citations. The release date is a
// fixed per-version constant, not a wall clock, so identical runs produce
// byte-identical reports.
void add_provenance(Report& r, const IonSpecies* s);

void add_warnings(Report& r, const std::vector<std::string>& warnings);

void set_table(Report& r, const std::vector<std::string>& columns,
               const std::vector<std::vector<ReportJson>>& rows);

std::string render(const Report& r, ReportFormat format);

// round-trip helper: a rendered JSON report parses back to the same document
Report parse_report(const std::string& json_text);

std::string format_g(double v, int precision);

}  // namespace ionstark
