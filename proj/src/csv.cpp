#include "specgame/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace specgame {

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    char buffer[64];
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::runtime_error("row width mismatch writing " + path);
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buffer, sizeof buffer, "%.17g", row[c]);
            out << (c ? "," : "") << buffer;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream fields(line);
        while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.columns.size())
            throw std::runtime_error("row width mismatch reading " + path);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace specgame
