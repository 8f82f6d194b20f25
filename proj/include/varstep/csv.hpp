// CSV output with shortest round-trip numbers, UNIX line endings, mandatory
// headers. Regression tests diff these files byte for byte.
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace varstep::io {

// Shortest decimal representation that round-trips to the same double.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  void raw_line(const std::string& line);
  bool good() const { return static_cast<bool>(out_); }

 private:
  std::ofstream out_;
  size_t columns_ = 0;
};

}  // namespace varstep::io
