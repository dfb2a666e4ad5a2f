#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace polyrag {

struct ReportRow {
    std::string name;
    std::vector<std::string> cells;       // rendered values, one per non-name column
    std::map<std::string, double> metrics; // raw values for programmatic checks
    bool invalid = false;
};

struct EvalReport {
    std::string title;
    std::vector<std::string> columns; // first column names the row
    std::vector<ReportRow> rows;

    const ReportRow* find(std::string_view name) const;
};

enum class ReportFormat { Markdown, Csv };

std::string to_markdown(const EvalReport& report);
std::string to_csv(const EvalReport& report);

// Throws InvalidArgument on an empty report and IoError on write failure.
void emit_report(const EvalReport& report, ReportFormat format, const std::string& path);

std::string format_fixed(double value, int decimals = 4);

} // namespace polyrag
