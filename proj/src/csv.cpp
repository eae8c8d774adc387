#include "fraclap/csv.hpp"

#include <fstream>

#include "fraclap/error.hpp"

namespace fraclap {

namespace {

void append_row(std::string& out, const CsvRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += row[i];
  }
  out += '\n';
}

}  // namespace

std::string csv_text(const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::string out;
  append_row(out, header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw Error(Errc::BadParams, "csv row width does not match the header");
    append_row(out, r);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(Errc::Io, "write failed for " + path);
}

void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows) {
  write_text(path, csv_text(header, rows));
}

}  // namespace fraclap
