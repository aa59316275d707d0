#pragma once

#include <string>
#include <vector>

#include "cholqr/types.hpp"

namespace cholqr::bench {

/// Parse a parameter grid:
///   "v"            single value
///   "lo:hi"        powers of 10 from lo to hi (same as lo:hi:log10)
///   "lo:hi:log10"  powers of 10
///   "lo:hi:step"   arithmetic with the given step
std::vector<double> parse_grid(const std::string& text);

std::vector<Index> parse_index_grid(const std::string& text);
std::vector<int> parse_int_grid(const std::string& text);

/// Comma-separated method names, or "all" for the full family.
std::vector<Method> parse_methods(const std::string& text);

}  // namespace cholqr::bench
