#include "bench/grids.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cholqr::bench {

namespace {

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number in grid: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty() || parts.size() > 3)
    throw std::invalid_argument("bad grid syntax: '" + text + "'");
  if (parts.size() == 1) return {parse_double(parts[0])};

  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  if (lo > hi) throw std::invalid_argument("grid lower bound exceeds upper: '" + text + "'");

  std::vector<double> grid;
  if (parts.size() == 2 || parts[2] == "log10") {
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= 10.0) grid.push_back(v);
  } else {
    const double step = parse_double(parts[2]);
    if (step <= 0.0) throw std::invalid_argument("grid step must be positive: '" + text + "'");
    for (double v = lo; v <= hi + step * 1e-9; v += step) grid.push_back(v);
  }
  return grid;
}

std::vector<Index> parse_index_grid(const std::string& text) {
  std::vector<Index> out;
  for (double v : parse_grid(text)) out.push_back(static_cast<Index>(std::llround(v)));
  return out;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_grid(text)) out.push_back(static_cast<int>(std::llround(v)));
  return out;
}

std::vector<Method> parse_methods(const std::string& text) {
  static const std::vector<Method> kAll = {
      Method::HouseholderQr,     Method::CholeskyQr,    Method::CholeskyQr2,
      Method::ShiftedCholeskyQr3, Method::RluCholeskyQr, Method::RqrCholeskyQr,
      Method::RqrCholeskyQrGaussian,
  };
  if (text == "all") return kAll;
  std::vector<Method> out;
  for (const std::string& name : split(text, ',')) {
    bool found = false;
    for (Method m : kAll) {
      if (name == method_name(m)) {
        out.push_back(m);
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("unknown method: '" + name + "'");
  }
  if (out.empty()) throw std::invalid_argument("empty method list");
  return out;
}

}  // namespace cholqr::bench
