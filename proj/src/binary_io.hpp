#pragma once

// Little-endian primitives for the binary file formats.  Byte order is fixed
// in the formats, so conversions are spelled out instead of relying on host
// endianness.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "einsvd/errors.hpp"

namespace einsvd::detail {

inline void put_u8(std::ostream& os, std::uint8_t v) {
    os.put(static_cast<char>(v));
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(b, 8);
}

inline void put_f64(std::ostream& os, double v) {
    put_u64(os, std::bit_cast<std::uint64_t>(v));
}

inline std::uint8_t get_u8(std::istream& is, const char* what) {
    const int c = is.get();
    if (c == EOF) throw io_error(std::string("unexpected end of file reading ") + what);
    return static_cast<std::uint8_t>(c);
}

inline std::uint64_t get_u64(std::istream& is, const char* what) {
    char b[8];
    if (!is.read(b, 8))
        throw io_error(std::string("unexpected end of file reading ") + what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

inline double get_f64(std::istream& is, const char* what) {
    return std::bit_cast<double>(get_u64(is, what));
}

} // namespace einsvd::detail
