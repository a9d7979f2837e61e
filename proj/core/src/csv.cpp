#include "cavity/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cavity {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  if (text == "inf" || text == "+inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  if (text == "nan") return NAN;
  double x = 0.0;
  const char* first = text.data();
  if (!text.empty() && text[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return x;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (current_) out_ << ',';
  out_ << s;
  ++current_;
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }

CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

void CsvWriter::end_row() {
  if (current_ != columns_) {
    throw std::logic_error("CsvWriter: row has " + std::to_string(current_) +
                           " cells, header has " + std::to_string(columns_));
  }
  out_ << '\n';
  current_ = 0;
}

}  // namespace cavity
