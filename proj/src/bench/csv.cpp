#include "bench/csv.hpp"

#include <charconv>

#include "cholqr/errors.hpp"

namespace cholqr::bench {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt(long long v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

CsvWriter::CsvWriter(const std::string& path) : os_(path), path_(path) {
  if (!os_) throw Error("cannot open for writing: " + path);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) os_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n\r") != std::string::npos) {
      os_ << '"';
      for (char c : f) {
        if (c == '"') os_ << '"';
        os_ << c;
      }
      os_ << '"';
    } else {
      os_ << f;
    }
  }
  os_ << "\r\n";
  if (!os_) throw Error("write failed: " + path_);
}

}  // namespace cholqr::bench
