#pragma once

// CSV emission and parse-back. Numbers are printed with the shortest representation
// that round-trips exactly, so rerunning a config with the same seed reproduces
// byte-identical files and parsing an emitted file recovers the values bit for bit.

#include <string>
#include <vector>

namespace qdsim {

// shortest exact decimal form; NaN prints as "nan", infinities as "inf"/"-inf"
std::string format_double(double v);

// header then one line per row, comma-separated, newline-terminated
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path); // throws on unreadable path

// strict double parse of one CSV cell ("nan" allowed); throws on trailing junk
double parse_double(const std::string& cell);

} // namespace qdsim
