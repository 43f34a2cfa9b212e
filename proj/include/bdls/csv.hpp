#ifndef BDLS_CSV_HPP
#define BDLS_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace bdls {

// Shortest round-trippable decimal form of v ("%.17g" fallback), '.' decimal
// point regardless of locale.
std::string format_double(double v);

// Comma separator, '.' decimal, one header row, LF line endings.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);

private:
  std::ofstream out_;
};

}  // namespace bdls

#endif
