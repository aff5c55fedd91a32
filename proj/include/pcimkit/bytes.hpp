#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcimkit {

using Byte = std::uint8_t;
using Bytes = std::vector<Byte>;
using ByteView = std::span<const Byte>;

inline constexpr std::size_t kDigestSize = 32;

// Fixed 32-octet value. Used for hash outputs, roots and nonces.
struct Digest {
    std::array<Byte, kDigestSize> bytes{};

    static Digest from(ByteView view); // throws InvalidArgument unless exactly 32 octets
    ByteView view() const { return bytes; }
    bool is_zero() const;

    auto operator<=>(const Digest&) const = default;
};

std::string to_hex(ByteView data);
inline std::string to_hex(const Digest& d) { return to_hex(d.view()); }
Bytes from_hex(std::string_view hex);
Digest digest_from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

// True when `needle` occurs as a contiguous run inside `haystack`.
bool contains_subsequence(ByteView haystack, ByteView needle);

} // namespace pcimkit
