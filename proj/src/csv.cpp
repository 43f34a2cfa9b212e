#include "bdls/csv.hpp"

#include <cstdio>
#include <cstring>

#include "bdls/errors.hpp"

namespace bdls {

std::string format_double(double v) {
  char buf[40];
  // Try increasing precision until the value round-trips exactly.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return std::string(buf);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw validation_error("cannot open output file: " + path);
}

void CsvWriter::header(const std::vector<std::string>& names) {
  row_mixed(names);
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out_ << ',';
    out_ << format_double(values[k]);
  }
  out_ << '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out_ << ',';
    out_ << cells[k];
  }
  out_ << '\n';
}

}  // namespace bdls
