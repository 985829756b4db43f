#include "csv.hpp"

#include "error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gsa {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

static std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, path + ": empty file");
    table.header = split_commas(line);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_commas(line);
        if (fields.size() != table.header.size())
            fail(ErrorKind::Parse, path + ": row with " + std::to_string(fields.size()) +
                                       " fields, header has " + std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    return table;
}

void write_lines(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << content;
    if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

std::vector<double> read_value_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        values.push_back(parse_double(line, path + ":" + std::to_string(lineno)));
    }
    return values;
}

double parse_double(const std::string& token, const std::string& context) {
    // strtod via stringstream is locale-dependent; from_chars for doubles is
    // incomplete in some libstdc++ releases, so use strtod with checks.
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0'))
        fail(ErrorKind::Parse, context + ": not a number: '" + token + "'");
    return v;
}

long long parse_int(const std::string& token, const std::string& context) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        fail(ErrorKind::Parse, context + ": not an integer: '" + token + "'");
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace gsa
