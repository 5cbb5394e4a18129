#include "hdboot/core/csv.hpp"

#include "hdboot/core/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hdboot {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        // trim surrounding whitespace and quotes
        const auto first = cell.find_first_not_of(" \t\"");
        const auto last = cell.find_last_not_of(" \t\"\r");
        cells.push_back(first == std::string::npos ? std::string{} : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidDataError("cannot open CSV file " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidDataError("CSV file " + path.string() + " is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    CsvTable table;
    table.header = split_line(line);
    const std::size_t cols = table.header.size();

    std::vector<double> flat;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto cells = split_line(line);
        if (cells.size() != cols) {
            throw InvalidDataError("CSV row " + std::to_string(rows + 2) + " has " + std::to_string(cells.size()) +
                                   " cells, header has " + std::to_string(cols));
        }
        for (const auto& c : cells) {
            double v = 0.0;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec != std::errc{} || res.ptr != c.data() + c.size()) {
                throw InvalidDataError("CSV row " + std::to_string(rows + 2) + ": non-numeric cell '" + c + "'");
            }
            flat.push_back(v);
        }
        ++rows;
    }
    table.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        flat.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    return table;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace hdboot
