#pragma once

#include <string>
#include <vector>

namespace specgame {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Floats are written with 17 significant digits so read-back is exact.
void write_csv(const std::string& path, const CsvTable& table);

CsvTable read_csv(const std::string& path);

}  // namespace specgame
