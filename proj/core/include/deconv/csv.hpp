#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace deconv {

/// Minimal CSV writer, RFC-4180 quoting, one header row.
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  static std::string num(double v);
  static std::string num(long long v);

private:
  std::ofstream os_;
  std::size_t width_;
  static std::string escape(const std::string& f);
};

}  // namespace deconv
