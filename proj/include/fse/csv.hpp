#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fse {

// Minimal RFC-4180-style CSV writer: header row, '.' decimal separator,
// deterministic %.17g formatting.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  }

  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out_ << ',';
      out_ << cols[i];
    }
    out_ << '\n';
  }

  CsvWriter& field(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    sep();
    out_ << buf;
    return *this;
  }
  CsvWriter& field(int v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& field(const std::string& v) {
    sep();
    out_ << v;
    return *this;
  }
  void endrow() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace fse
