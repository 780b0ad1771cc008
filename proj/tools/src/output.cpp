#include "skclt_cli/output.hpp"

#include "skclt/error.hpp"
#include "skclt_cli/config.hpp"

namespace skclt::cli {

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  row_ = std::move(header);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& value) {
  row_.push_back(csv_field(value));
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_double(value)); }
CsvWriter& CsvWriter::cell(long long value) { return cell(std::to_string(value)); }
CsvWriter& CsvWriter::cell(unsigned long long value) { return cell(std::to_string(value)); }

void CsvWriter::end_row() {
  if (row_.size() != columns_) throw DimensionError("csv row width differs from the header");
  for (std::size_t i = 0; i < row_.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << row_[i];
  }
  out_ << '\n';
  row_.clear();
}

}  // namespace skclt::cli
