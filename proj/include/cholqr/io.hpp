#pragma once

#include <string>

#include "cholqr/types.hpp"

namespace cholqr::io {

/// Binary dense-matrix format (.dmat): a 16-byte little-endian header
///   magic  u32 = 0x54414D44 ("DMAT")
///   rows   u64
///   cols   u32
/// followed by rows*cols binary64 values in row-major order.
inline constexpr std::uint32_t kDmatMagic = 0x54414D44u;

void save_dmat(const std::string& path, const ConstMatrixRef& a);
Matrix load_dmat(const std::string& path);

}  // namespace cholqr::io
