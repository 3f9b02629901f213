#include "ionstark/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "ionstark/errors.hpp"
#include "ionstark/version.hpp"

namespace ionstark {

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "human") return ReportFormat::human;
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw ValidationError("unknown format '" + s +
                          "' (expected human, csv or json)");
}

std::string format_g(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

Report make_report(const std::string& command) {
    Report r;
    r.doc["command"] = command;
    r.doc["scenario"] = ReportJson::object();
    r.doc["results"] = ReportJson::object();
    r.doc["warnings"] = ReportJson::array();
    return r;
}

void add_provenance(Report& r, const IonSpecies* s) {
    ReportJson p;
    p["tool"] = "ionstark";
    p["version"] = version;
    p["release_date"] = release_date;
    if (s != nullptr) {
        std::set<std::string> cites;
        for (const auto& t : s->transitions)
            if (!t.source_citation.empty()) cites.insert(t.source_citation);
        p["data_citations"] = ReportJson::array();
        for (const auto& c : cites) p["data_citations"].push_back(c);
    }
    r.doc["provenance"] = std::move(p);
}

void add_warnings(Report& r, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) r.doc["warnings"].push_back(w);
}

void set_table(Report& r, const std::vector<std::string>& columns,
               const std::vector<std::vector<ReportJson>>& rows) {
    ReportJson t;
    t["columns"] = columns;
    t["rows"] = ReportJson::array();
    for (const auto& row : rows) {
        ReportJson jr = ReportJson::array();
        for (const auto& cell : row) jr.push_back(cell);
        t["rows"].push_back(std::move(jr));
    }
    r.doc["table"] = std::move(t);
}

namespace {

std::string csv_cell(const ReportJson& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_g(v.get<double>(), 12);
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        return quoted;
    }
    return s;
}

std::string human_cell(const ReportJson& v) {
    if (v.is_null()) return "-";
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (std::isnan(d)) return "-";
        return format_g(d, 6);
    }
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    return v.dump();
}

void render_scalars(std::ostringstream& out, const ReportJson& obj,
                    const std::string& indent) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (it->is_object()) {
            out << indent << it.key() << ":\n";
            render_scalars(out, *it, indent + "  ");
        } else if (it->is_array()) {
            out << indent << it.key() << ": [";
            for (size_t i = 0; i < it->size(); ++i)
                out << (i ? ", " : "") << human_cell((*it)[i]);
            out << "]\n";
        } else {
            out << indent << it.key() << ": " << human_cell(*it) << "\n";
        }
    }
}

std::string render_human(const Report& r) {
    std::ostringstream out;
    out << "ionstark " << r.doc.value("command", "") << "\n";
    for (const char* section : {"scenario", "results"}) {
        if (!r.doc.contains(section) || r.doc[section].empty()) continue;
        out << section << ":\n";
        render_scalars(out, r.doc[section], "  ");
    }
    if (r.doc.contains("verdict"))
        out << "verdict: " << r.doc["verdict"].get<std::string>() << "\n";
    if (r.doc.contains("table")) {
        const auto& t = r.doc["table"];
        const auto& cols = t["columns"];
        std::vector<std::vector<std::string>> cells;
        std::vector<size_t> width(cols.size());
        {
            std::vector<std::string> head;
            for (size_t c = 0; c < cols.size(); ++c) {
                head.push_back(cols[c].get<std::string>());
                width[c] = head.back().size();
            }
            cells.push_back(std::move(head));
        }
        for (const auto& row : t["rows"]) {
            std::vector<std::string> line;
            for (size_t c = 0; c < cols.size(); ++c) {
                line.push_back(c < row.size() ? human_cell(row[c]) : "");
                width[c] = std::max(width[c], line.back().size());
            }
            cells.push_back(std::move(line));
        }
        out << "table:\n";
        for (const auto& line : cells) {
            out << " ";
            for (size_t c = 0; c < line.size(); ++c) {
                out << " " << line[c];
                if (c + 1 < line.size())
                    out << std::string(width[c] - line[c].size(), ' ');
            }
            out << "\n";
        }
    }
    if (r.doc.contains("warnings") && !r.doc["warnings"].empty()) {
        out << "warnings:\n";
        for (const auto& w : r.doc["warnings"])
            out << "  - " << w.get<std::string>() << "\n";
    }
    return out.str();
}

std::string render_csv(const Report& r) {
    std::ostringstream out;
    if (r.doc.contains("table")) {
        const auto& t = r.doc["table"];
        const auto& cols = t["columns"];
        for (size_t c = 0; c < cols.size(); ++c)
            out << (c ? "," : "") << csv_cell(cols[c]);
        out << "\n";
        for (const auto& row : t["rows"]) {
            for (size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << csv_cell(row[c]);
            out << "\n";
        }
        return out.str();
    }
    // no table: flatten the results block as key,value lines
    out << "key,value\n";
    if (r.doc.contains("results"))
        for (auto it = r.doc["results"].begin(); it != r.doc["results"].end();
             ++it)
            if (!it->is_structured())
                out << csv_cell(it.key()) << "," << csv_cell(*it) << "\n";
    return out.str();
}

}  // namespace

std::string render(const Report& r, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: return r.doc.dump(2) + "\n";
        case ReportFormat::csv: return render_csv(r);
        default: return render_human(r);
    }
}

Report parse_report(const std::string& json_text) {
    Report r;
    r.doc = ReportJson::parse(json_text);
    return r;
}

}  // namespace ionstark
