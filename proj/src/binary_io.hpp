#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

// Little-endian scalar I/O. Doubles travel as their IEEE-754 bit pattern, so
// round-trips are bit-exact (NaN payloads included).

namespace bedmorph::detail {

inline void put_u32_le(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_f64_le(std::ostream& out, double v) {
  put_u64_le(out, std::bit_cast<std::uint64_t>(v));
}

inline bool get_u32_le(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return true;
}

inline bool get_u64_le(std::istream& in, std::uint64_t& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return true;
}

inline bool get_f64_le(std::istream& in, double& v) {
  std::uint64_t u = 0;
  if (!get_u64_le(in, u)) return false;
  v = std::bit_cast<double>(u);
  return true;
}

// Bulk variants. On little-endian hosts the payload is memcpy'd in one shot.

inline void put_f64_block_le(std::ostream& out, const double* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
  } else {
    for (std::size_t i = 0; i < count; ++i) put_f64_le(out, data[i]);
  }
}

inline bool get_f64_block_le(std::istream& in, double* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    return static_cast<bool>(
        in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8)));
  } else {
    for (std::size_t i = 0; i < count; ++i)
      if (!get_f64_le(in, data[i])) return false;
    return true;
  }
}

}  // namespace bedmorph::detail
