#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace skclt::cli {

// RFC 4180 quoting: fields holding a comma, quote, CR or LF are quoted and
// inner quotes doubled. Records end in LF.
std::string csv_field(const std::string& field);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& cell(const std::string& value);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(long value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(unsigned long value) { return cell(static_cast<unsigned long long>(value)); }
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::vector<std::string> row_;
};

}  // namespace skclt::cli
