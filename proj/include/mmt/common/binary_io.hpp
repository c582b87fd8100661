#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace mmt::io {

/// Raised when a binary stream ends before a complete field was read.
class TruncatedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Little-endian primitives. The host is assumed little-endian for float
// payloads (checked at compile time below); integers are assembled bytewise.
static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

inline void write_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

template <typename UInt>
void write_uint(std::ostream& out, UInt v) {
  unsigned char buf[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(out, buf, sizeof(UInt));
}

inline void write_f32(std::ostream& out, std::span<const float> values) {
  write_bytes(out, values.data(), values.size_bytes());
}

inline void read_bytes(std::istream& in, void* data, std::size_t n, const char* what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw TruncatedInput(std::string("truncated input while reading ") + what);
  }
}

template <typename UInt>
UInt read_uint(std::istream& in, const char* what) {
  unsigned char buf[sizeof(UInt)];
  read_bytes(in, buf, sizeof(UInt), what);
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(buf[i]) << (8 * i);
  return v;
}

inline std::string read_string(std::istream& in, std::size_t n, const char* what) {
  std::string s(n, '\0');
  if (n > 0) read_bytes(in, s.data(), n, what);
  return s;
}

inline void read_f32(std::istream& in, std::span<float> out, const char* what) {
  read_bytes(in, out.data(), out.size_bytes(), what);
}

}  // namespace mmt::io
