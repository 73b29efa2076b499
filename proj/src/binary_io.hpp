#pragma once

// Little-endian primitives shared by the model and feature-dump formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "gaitdcs/error.hpp"

namespace gaitdcs::detail {

template <typename UInt>
void write_le(std::ostream& out, UInt v) {
    char buf[sizeof(UInt)];
    for (std::size_t i = 0; i < sizeof(UInt); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, sizeof(UInt));
}

template <typename UInt>
UInt read_le(std::istream& in) {
    unsigned char buf[sizeof(UInt)];
    in.read(reinterpret_cast<char*>(buf), sizeof(UInt));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(UInt))) throw Error(ErrorCode::FormatError, "truncated file");
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(buf[i]) << (8 * i);
    return v;
}

inline void write_f32(std::ostream& out, float f) { write_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f)); }
inline float read_f32(std::istream& in) { return std::bit_cast<float>(read_le<std::uint32_t>(in)); }

inline void write_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

inline void expect_magic(std::istream& in, const char (&magic)[5], const std::string& what) {
    char buf[4] = {};
    in.read(buf, 4);
    if (in.gcount() != 4 || std::memcmp(buf, magic, 4) != 0)
        throw Error(ErrorCode::FormatError, what + ": bad magic, expected " + std::string(magic, 4));
}

}  // namespace gaitdcs::detail
