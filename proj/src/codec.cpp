// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "windtunnel/codec.hpp"

#include <bit>
#include <cstring>

#include "windtunnel/error.hpp"
#include "windtunnel/hashing.hpp"

namespace windtunnel {

Encoder& Encoder::put_u64(std::uint64_t v) {
    while (v >= 0x80) {
        out_.push_back(static_cast<char>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    out_.push_back(static_cast<char>(v));
    return *this;
}

Encoder& Encoder::put(std::string_view s) {
    put_u64(s.size());
    out_.append(s);
    return *this;
}

Encoder& Encoder::put_double(double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int shift = 56; shift >= 0; shift -= 8) {
        out_.push_back(static_cast<char>((bits >> shift) & 0xff));
    }
    return *this;
}

std::uint64_t Decoder::get_u64() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        if (pos_ >= in_.size()) {
            throw Error("codec: truncated varint");
        }
        auto byte = static_cast<unsigned char>(in_[pos_++]);
        v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
        if ((byte & 0x80) == 0) {
            return v;
        }
    }
    throw Error("codec: varint too long");
}

std::string_view Decoder::get() {
    auto len = get_u64();
    if (len > in_.size() - pos_) {
        throw Error("codec: truncated string");
    }
    auto s = in_.substr(pos_, len);
    pos_ += len;
    return s;
}

double Decoder::get_double() {
    if (in_.size() - pos_ < 8) {
        throw Error("codec: truncated double");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits = (bits << 8) | static_cast<unsigned char>(in_[pos_++]);
    }
    return std::bit_cast<double>(bits);
}

std::string describe_record(std::string_view bytes, std::size_t max_len) {
    std::string out;
    for (char c : bytes.substr(0, max_len)) {
        auto u = static_cast<unsigned char>(c);
        if (u >= 0x20 && u < 0x7f) {
            out.push_back(c);
        } else {
            out.push_back('.');
        }
    }
    if (bytes.size() > max_len) {
        out += "...";
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t keyed_hash(std::uint64_t seed, std::string_view bytes) noexcept {
    return splitmix64(splitmix64(seed) ^ fnv1a64(bytes));
}

} // namespace windtunnel
