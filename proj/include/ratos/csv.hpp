#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "ratos/common.hpp"

namespace ratos {

/// Deterministic CSV writer: doubles are formatted with %.17g so identical
/// runs produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& line);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& values);

  static std::string format(double value);
  static std::string format(const Complex& value);  // "re" and "im" columns

 private:
  std::ofstream out_;
};

/// FNV-1a hash of a string, used to stamp resolved configurations into
/// output files.
std::string stable_hash_hex(const std::string& text);

}  // namespace ratos
