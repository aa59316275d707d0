#include "cholqr/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "cholqr/errors.hpp"

namespace cholqr::io {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_dmat(const std::string& path, const ConstMatrixRef& a) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path);
  put_u32(os, kDmatMagic);
  put_u64(os, static_cast<std::uint64_t>(a.rows()));
  put_u32(os, static_cast<std::uint32_t>(a.cols()));
  // Row-major payload; rows of a Ref are contiguous, the stride between rows
  // may not be, so write row by row.
  for (Index i = 0; i < a.rows(); ++i)
    os.write(reinterpret_cast<const char*>(a.row(i).data()),
             static_cast<std::streamsize>(sizeof(double)) * a.cols());
  if (!os) throw Error("write failed: " + path);
}

Matrix load_dmat(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open for reading: " + path);
  const std::uint32_t magic = get_u32(is);
  if (!is || magic != kDmatMagic) throw Error("not a .dmat file: " + path);
  const std::uint64_t rows = get_u64(is);
  const std::uint32_t cols = get_u32(is);
  Matrix a(static_cast<Index>(rows), static_cast<Index>(cols));
  is.read(reinterpret_cast<char*>(a.data()),
          static_cast<std::streamsize>(sizeof(double)) * a.size());
  if (!is) throw Error("truncated .dmat file: " + path);
  return a;
}

}  // namespace cholqr::io
