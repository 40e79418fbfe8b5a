#include "stiffstep/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace stiffstep {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& columns,
                     const std::string& config_hash)
    : out_(out), columns_(columns.size()) {
  if (!config_hash.empty()) out_ << "# config_hash=" << config_hash << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::separator() {
  if (cell_ >= columns_) throw std::logic_error("CsvWriter: too many cells in row");
  if (cell_ > 0) out_ << ',';
  ++cell_;
}

CsvWriter& CsvWriter::operator<<(double value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::blank() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  if (cell_ != columns_) throw std::logic_error("CsvWriter: row has missing cells");
  out_ << '\n';
  cell_ = 0;
}

}  // namespace stiffstep
