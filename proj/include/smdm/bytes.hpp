#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "smdm/error.hpp"

namespace smdm {

// FNV-1a 64-bit, the routing and handshake hash. Published constants.
inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffsetBasis) {
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= kFnvPrime;
    }
    return h;
}

// SplitMix64. Fixed so that seeded shuffles and generators are
// bit-identical across implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

    // Uniform in [0, 1), 53 bits of mantissa.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_real(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t state_;
};

// Big-endian primitive encoding shared by the wire format and model
// snapshots.
class ByteWriter {
public:
    void put_u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }

    void put_u16(std::uint16_t v) {
        put_u8(static_cast<std::uint8_t>(v >> 8));
        put_u8(static_cast<std::uint8_t>(v));
    }

    void put_u32(std::uint32_t v) {
        put_u16(static_cast<std::uint16_t>(v >> 16));
        put_u16(static_cast<std::uint16_t>(v));
    }

    void put_u64(std::uint64_t v) {
        put_u32(static_cast<std::uint32_t>(v >> 32));
        put_u32(static_cast<std::uint32_t>(v));
    }

    void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

    void put_bytes(std::string_view bytes) { buf_.append(bytes); }

    void put_string(std::string_view s) {
        put_u32(static_cast<std::uint32_t>(s.size()));
        put_bytes(s);
    }

    const std::string& bytes() const { return buf_; }
    std::string take() { return std::move(buf_); }
    std::size_t size() const { return buf_.size(); }

private:
    std::string buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view bytes, errc underrun = errc::truncated_frame)
        : bytes_(bytes), underrun_(underrun) {}

    std::uint8_t get_u8() {
        need(1);
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }

    std::uint16_t get_u16() {
        std::uint16_t hi = get_u8();
        return static_cast<std::uint16_t>((hi << 8) | get_u8());
    }

    std::uint32_t get_u32() {
        std::uint32_t hi = get_u16();
        return (hi << 16) | get_u16();
    }

    std::uint64_t get_u64() {
        std::uint64_t hi = get_u32();
        return (hi << 32) | get_u32();
    }

    double get_f64() { return std::bit_cast<double>(get_u64()); }

    std::string_view get_bytes(std::size_t n) {
        need(n);
        std::string_view out = bytes_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    std::string get_string() {
        std::uint32_t n = get_u32();
        return std::string(get_bytes(n));
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n)
            fail(underrun_, "input ends after " + std::to_string(bytes_.size()) + " bytes");
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
    errc underrun_;
};

} // namespace smdm
