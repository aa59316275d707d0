#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace cholqr::bench {

/// Shortest round-trip formatting for binary64.
std::string fmt(double v);
std::string fmt(long long v);
std::string fmt(std::uint64_t v);
std::string fmt_opt(const std::optional<double>& v);

/// RFC 4180 writer: fields with commas, quotes or newlines are quoted,
/// embedded quotes doubled.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream os_;
  std::string path_;
};

}  // namespace cholqr::bench
