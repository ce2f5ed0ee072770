#include "taskload/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "taskload/errors.hpp"

namespace taskload::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::size_t CsvTable::column(const std::string& name, const std::string& source) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw DataError(source + ": missing column '" + name + "'");
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind('#', 0) == 0) {
            t.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
            continue;
        }
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line);
        for (auto& c : cells) c = trim(c);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size())
            throw DataError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                            " columns, found " + std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
        t.row_lines.push_back(lineno);
    }
    if (!have_header) throw DataError(source + ": no header line");
    return t;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

std::string format_csv(const CsvTable& t) {
    std::string out;
    for (const auto& c : t.comments) out += "# " + c + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

double parse_cell(const std::string& cell, const std::string& source, std::size_t line, std::size_t col) {
    double v = 0.0;
    const char* b = cell.data();
    const char* e = b + cell.size();
    const auto r = std::from_chars(b, e, v);
    if (cell.empty() || r.ec != std::errc() || r.ptr != e || !std::isfinite(v))
        throw DataError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": not a number: '" + cell +
                        "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError(path + ": cannot write");
        out << content;
        out.flush();
        if (!out) throw ConfigError(path + ": write failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError(path + ": rename failed");
    }
}

}  // namespace taskload::cli
