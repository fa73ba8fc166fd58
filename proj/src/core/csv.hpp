#ifndef RADARCOX_CSV_HPP
#define RADARCOX_CSV_HPP

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace radarcox {

/// Stable shortest-roundtrip formatting so repeated runs emit identical bytes.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
  }

  void header(const std::vector<std::string>& cols) { line(cols); }

  void row(const std::vector<std::string>& cells) { line(cells); }

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::ofstream out_;
};

}  // namespace radarcox

#endif
