#include "deconv/csv.hpp"

#include "deconv/common.hpp"

#include <cstdio>

namespace deconv {

std::string CsvWriter::escape(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : os_(path), width_(header.size()) {
  if (!os_) throw ParamError("cannot open for writing: " + path);
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_)
    throw ParamError("CSV row width differs from the header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os_ << ',';
    os_ << escape(fields[i]);
  }
  os_ << "\r\n";
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvWriter::num(long long v) { return std::to_string(v); }

}  // namespace deconv
