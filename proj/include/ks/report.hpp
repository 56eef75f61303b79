#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ks {

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& s);

struct Row {
    std::string name;
    double value = 0;       // NaN when the row carries only a note
    double error_bound = 0;
    std::string status;
    std::string note;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> env; // tolerances, budgets, seed
    std::vector<Row> rows;

    void add(std::string name, double value, double error_bound, std::string status, std::string note = "");
    void note(std::string name, std::string status, std::string note);
};

std::string render(const Report& r, Format f);
Report parse_report(const std::string& text, Format f);

// Doubles print as the shortest text that reads back to the same value.
std::string format_number(double x);
double parse_number(const std::string& s);

bool same_report(const Report& a, const Report& b);

} // namespace ks
