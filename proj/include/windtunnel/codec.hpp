// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace windtunnel {

// Length-prefixed binary record encoding used for engine keys and payloads.
// Strings are varint-length + bytes, doubles are their IEEE-754 bits in
// big-endian order, so equal values always encode to equal bytes.
class Encoder {
public:
    Encoder& put(std::string_view s);
    Encoder& put_u64(std::uint64_t v);
    Encoder& put_double(double v);

    const std::string& bytes() const& noexcept { return out_; }
    std::string bytes() && noexcept { return std::move(out_); }

private:
    std::string out_;
};

class Decoder {
public:
    explicit Decoder(std::string_view in) noexcept : in_(in) {}

    std::string_view get();
    std::uint64_t get_u64();
    double get_double();

    bool done() const noexcept { return pos_ == in_.size(); }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

/// Printable rendering of an encoded record for error messages.
std::string describe_record(std::string_view bytes, std::size_t max_len = 96);

} // namespace windtunnel
