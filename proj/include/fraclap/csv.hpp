#pragma once

#include <string>
#include <vector>

namespace fraclap {

using CsvRow = std::vector<std::string>;

/// Header line plus rows, comma separated, '\n' line ends.
std::string csv_text(const CsvRow& header, const std::vector<CsvRow>& rows);
/// Throws Io.
void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows);
void write_text(const std::string& path, const std::string& text);

}  // namespace fraclap
