#pragma once

// Little-endian binary IO helpers shared by the dataset and checkpoint formats.

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

#include "mwprec/errors.hpp"

namespace mwprec::binio {

inline void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& os, uint64_t v) {
    put_u32(os, static_cast<uint32_t>(v));
    put_u32(os, static_cast<uint32_t>(v >> 32));
}

inline void put_f64(std::ostream& os, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

inline void put_u8(std::ostream& os, uint8_t v) {
    os.write(reinterpret_cast<const char*>(&v), 1);
}

inline void put_f32_array(std::ostream& os, const std::vector<float>& v) {
    for (float x : v) {
        uint32_t bits;
        std::memcpy(&bits, &x, 4);
        put_u32(os, bits);
    }
}

inline uint32_t get_u32(std::istream& is, const char* what) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw FormatError(std::string("unexpected end of file reading ") + what);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

inline uint64_t get_u64(std::istream& is, const char* what) {
    const uint64_t lo = get_u32(is, what);
    const uint64_t hi = get_u32(is, what);
    return lo | (hi << 32);
}

inline double get_f64(std::istream& is, const char* what) {
    const uint64_t bits = get_u64(is, what);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

inline uint8_t get_u8(std::istream& is, const char* what) {
    unsigned char b;
    if (!is.read(reinterpret_cast<char*>(&b), 1))
        throw FormatError(std::string("unexpected end of file reading ") + what);
    return b;
}

inline void get_f32_array(std::istream& is, std::vector<float>& v, size_t n, const char* what) {
    v.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const uint32_t bits = get_u32(is, what);
        std::memcpy(&v[i], &bits, 4);
    }
}

} // namespace mwprec::binio
