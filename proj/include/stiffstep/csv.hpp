#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stiffstep {

/// Fixed "%.15g" formatting so reruns are byte-identical.
std::string format_number(double value);

/// Comma-separated rows with a header line. When `config_hash` is non-empty a
/// leading "# config_hash=..." comment line is written first.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& columns,
            const std::string& config_hash = {});

  CsvWriter& operator<<(double value);
  CsvWriter& operator<<(const std::string& value);
  CsvWriter& operator<<(const char* value) { return *this << std::string(value); }
  CsvWriter& operator<<(long long value);
  CsvWriter& operator<<(int value) { return *this << static_cast<long long>(value); }
  CsvWriter& operator<<(std::size_t value) { return *this << static_cast<long long>(value); }
  /// Leaves the cell empty.
  CsvWriter& blank();
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t cell_ = 0;
};

}  // namespace stiffstep
