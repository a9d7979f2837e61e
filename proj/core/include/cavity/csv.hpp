#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cavity {

/// Shortest round-trip decimal for a double (locale independent);
/// "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

/// Parses the output of format_double (and ordinary decimal literals).
double parse_double(const std::string& text);

/// Minimal CSV writer: a header row, then rows of pre-formatted cells.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(unsigned x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(long x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(unsigned long x) { return cell(static_cast<long long>(x)); }
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t current_ = 0;
};

}  // namespace cavity
