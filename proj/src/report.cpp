#include "polyrag/report.hpp"

#include <cstdio>
#include <fstream>

#include "polyrag/errors.hpp"

namespace polyrag {
namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string md_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out;
}

void check(const EvalReport& report) {
    if (report.columns.empty()) throw InvalidArgument("report has no columns");
    for (const auto& row : report.rows)
        if (row.cells.size() + 1 != report.columns.size())
            throw InvalidArgument("row '" + row.name + "' does not match the column count");
}

} // namespace

const ReportRow* EvalReport::find(std::string_view name) const {
    for (const auto& r : rows)
        if (r.name == name) return &r;
    return nullptr;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::string to_markdown(const EvalReport& report) {
    check(report);
    std::string out;
    if (!report.title.empty()) out += "### " + report.title + "\n\n";
    out += "|";
    for (const auto& c : report.columns) out += " " + md_cell(c) + " |";
    out += "\n|";
    for (std::size_t i = 0; i < report.columns.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
    out += "\n";
    for (const auto& row : report.rows) {
        out += "| " + md_cell(row.name) + " |";
        for (const auto& cell : row.cells) out += " " + md_cell(cell) + " |";
        out += "\n";
    }
    return out;
}

std::string to_csv(const EvalReport& report) {
    check(report);
    std::string out;
    for (std::size_t i = 0; i < report.columns.size(); ++i) out += (i ? "," : "") + csv_field(report.columns[i]);
    out += "\n";
    for (const auto& row : report.rows) {
        out += csv_field(row.name);
        for (const auto& cell : row.cells) out += "," + csv_field(cell);
        out += "\n";
    }
    return out;
}

void emit_report(const EvalReport& report, ReportFormat format, const std::string& path) {
    if (report.rows.empty()) throw InvalidArgument("report '" + report.title + "' has no rows");
    const std::string body = format == ReportFormat::Markdown ? to_markdown(report) : to_csv(report);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path, "cannot write report");
    f << body;
    if (!f) throw IoError(path, "write failed");
}

} // namespace polyrag
