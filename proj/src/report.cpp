#include "ks/report.hpp"
#include "ks/errors.hpp"
#include "ks/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace ks {

Format parse_format(const std::string& s) {
    if (s == "table") return Format::Table;
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw Error(ErrorKind::ParseError, "format must be table, csv or json");
}

void Report::add(std::string name, double value, double error_bound, std::string status, std::string note) {
    rows.push_back({std::move(name), value, error_bound, std::move(status), std::move(note)});
}

void Report::note(std::string name, std::string status, std::string text) {
    add(std::move(name), std::numeric_limits<double>::quiet_NaN(), 0, std::move(status), std::move(text));
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return format_double(x);
}

double parse_number(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    // ERANGE on underflow still leaves the right subnormal
    bool overflow = errno == ERANGE && std::isinf(v);
    if (s.empty() || end != s.c_str() + s.size() || overflow) throw Error(ErrorKind::ParseError, "report: not a number: " + s);
    return v;
}

namespace {

const char* kHeader[] = {"name", "value", "error_bound", "status", "note"};

std::vector<std::string> cells(const Row& r) {
    return {r.name, format_number(r.value), format_number(r.error_bound), r.status, r.note};
}

Row from_cells(const std::vector<std::string>& c) {
    if (c.size() != 5) throw Error(ErrorKind::ParseError, "report: expected 5 columns");
    return {c[0], parse_number(c[1]), parse_number(c[2]), c[3], c[4]};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string env_line(const Report& r) {
    std::string s = "# " + r.command;
    for (const auto& [k, v] : r.env) s += " " + k + "=" + v;
    return s;
}

void read_env_line(const std::string& line, Report& r) {
    std::istringstream in(line.substr(2));
    in >> r.command;
    std::string kv;
    while (in >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "report: bad environment entry " + kv);
        r.env.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
}

// Table cells are padded and trimmed, so bars, newlines and edge spaces get a backslash form.
std::string table_escape(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '\\') out += "\\\\";
        else if (ch == '|') out += "\\|";
        else if (ch == '\n') out += "\\n";
        else if (ch == ' ' && (i == 0 || i + 1 == s.size())) out += "\\s";
        else out += ch;
    }
    return out;
}

std::string table_unescape(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) throw Error(ErrorKind::ParseError, "report: dangling escape");
        switch (s[i]) {
        case '\\': out += '\\'; break;
        case '|': out += '|'; break;
        case 'n': out += '\n'; break;
        case 's': out += ' '; break;
        default: throw Error(ErrorKind::ParseError, std::string("report: bad escape \\") + s[i]);
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(' ');
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(' ');
    return s.substr(b, e - b + 1);
}

} // namespace

std::string render(const Report& r, Format f) {
    std::ostringstream out;
    if (f == Format::Json) {
        // Numbers are written by hand so that every double keeps its shortest round-trip form.
        auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
        auto num = [&](double x) { return std::isfinite(x) ? format_number(x) : str(format_number(x)); };
        out << "{\"command\":" << str(r.command) << ",\"env\":{";
        for (std::size_t i = 0; i < r.env.size(); ++i) out << (i ? "," : "") << str(r.env[i].first) << ":" << str(r.env[i].second);
        out << "},\"rows\":[";
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            const Row& w = r.rows[i];
            out << (i ? ",\n" : "\n") << "{\"name\":" << str(w.name) << ",\"value\":" << num(w.value)
                << ",\"error_bound\":" << num(w.error_bound) << ",\"status\":" << str(w.status) << ",\"note\":" << str(w.note) << "}";
        }
        out << "\n]}\n";
        return out.str();
    }
    if (f == Format::Csv) {
        out << env_line(r) << "\n";
        out << "name,value,error_bound,status,note\n";
        for (const auto& w : r.rows) {
            auto c = cells(w);
            for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv_field(c[i]);
            out << "\n";
        }
        return out.str();
    }
    std::vector<std::vector<std::string>> grid{{kHeader, kHeader + 5}};
    for (const auto& w : r.rows) {
        auto c = cells(w);
        for (auto& x : c) x = table_escape(x);
        grid.push_back(c);
    }
    std::size_t width[5] = {};
    for (const auto& g : grid)
        for (std::size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], g[i].size());
    out << env_line(r) << "\n";
    for (const auto& g : grid) {
        std::string line;
        for (std::size_t i = 0; i < 5; ++i) {
            std::string c = g[i];
            if (i + 1 < 5) c.resize(width[i], ' ');
            line += (i ? " | " : "") + c;
        }
        out << trim(line) << "\n";
    }
    return out.str();
}

Report parse_report(const std::string& text, Format f) {
    Report r;
    if (f == Format::Json) {
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(text);
        } catch (const nlohmann::ordered_json::parse_error& e) {
            throw Error(ErrorKind::ParseError, std::string("report: ") + e.what());
        }
        r.command = j.at("command").get<std::string>();
        for (const auto& [k, v] : j.at("env").items()) r.env.emplace_back(k, v.get<std::string>());
        auto num = [](const nlohmann::ordered_json& x) { return x.is_string() ? parse_number(x.get<std::string>()) : x.get<double>(); };
        for (const auto& w : j.at("rows"))
            r.rows.push_back({w.at("name"), num(w.at("value")), num(w.at("error_bound")), w.at("status"), w.at("note")});
        return r;
    }
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw Error(ErrorKind::ParseError, "report: missing header");
    read_env_line(line, r);
    std::getline(in, line); // column names
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (f == Format::Csv) {
            // an odd quote count means a quoted field runs onto the next line
            std::string more;
            while (std::count(line.begin(), line.end(), '"') % 2 && std::getline(in, more)) line += "\n" + more;
            r.rows.push_back(from_cells(csv_split(line)));
            continue;
        }
        line += ' ';
        std::vector<std::string> c;
        std::size_t pos = 0;
        for (int i = 0; i < 4; ++i) {
            auto bar = line.find(" | ", pos);
            if (bar == std::string::npos) throw Error(ErrorKind::ParseError, "report: short table row");
            c.push_back(table_unescape(trim(line.substr(pos, bar - pos))));
            pos = bar + 3;
        }
        c.push_back(table_unescape(trim(line.substr(pos))));
        r.rows.push_back(from_cells(c));
    }
    return r;
}

bool same_report(const Report& a, const Report& b) {
    auto eq = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    if (a.command != b.command || a.env != b.env || a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const Row &x = a.rows[i], &y = b.rows[i];
        if (x.name != y.name || !eq(x.value, y.value) || !eq(x.error_bound, y.error_bound) || x.status != y.status || x.note != y.note)
            return false;
    }
    return true;
}

} // namespace ks
