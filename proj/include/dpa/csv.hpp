#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace dpa {

/// Comma-separated rows at full double precision.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::initializer_list<std::string> header) : os_(os) {
    os_.precision(17);
    write_fields(std::vector<std::string>(header));
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) os_ << ',';
      os_ << v + 0.0;  // no negative zero
      first = false;
    }
    os_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k) os_ << ',';
      os_ << values[k] + 0.0;
    }
    os_ << '\n';
  }

  std::ostream& stream() { return os_; }

 private:
  void write_fields(const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k) os_ << ',';
      os_ << fields[k];
    }
    os_ << '\n';
  }

  std::ostream& os_;
};

}  // namespace dpa
