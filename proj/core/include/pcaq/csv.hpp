#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pcaq {

// 12 significant digits, shortest form; "nan", "inf", "-inf" for non-finite.
std::string fmt_num(double x);
// Quotes the field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& s);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  // Single "# ..." line echoing the configuration.
  void comment(const std::string& text);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
};

}  // namespace pcaq
