#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace hdboot {

struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;
};

/// Reads a numeric CSV with a mandatory header row. Throws InvalidDataError.
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

/// Round-trip-exact decimal rendering used by every CSV/JSON writer.
[[nodiscard]] std::string format_double(double x);

} // namespace hdboot
