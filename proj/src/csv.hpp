#pragma once

#include <string>
#include <vector>

namespace gsa {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::string& path);
void write_lines(const std::string& path, const std::string& content);

// one decimal value per line (external-model output format)
std::vector<double> read_value_lines(const std::string& path);

double parse_double(const std::string& token, const std::string& context);
long long parse_int(const std::string& token, const std::string& context);

// shortest round-trip formatting
std::string format_double(double v);

} // namespace gsa
