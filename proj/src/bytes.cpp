#include "pcimkit/bytes.hpp"

#include <algorithm>

#include "pcimkit/error.hpp"

namespace pcimkit {

Digest Digest::from(ByteView view) {
    if (view.size() != kDigestSize) {
        throw Error(ErrorCode::InvalidArgument,
                    "digest must be 32 octets, got " + std::to_string(view.size()));
    }
    Digest d;
    std::copy(view.begin(), view.end(), d.bytes.begin());
    return d;
}

bool Digest::is_zero() const {
    return std::all_of(bytes.begin(), bytes.end(), [](Byte b) { return b == 0; });
}

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (Byte b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

namespace {

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw Error(ErrorCode::InvalidHex, "odd length");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(ErrorCode::InvalidHex, std::string(hex.substr(i, 2)));
        }
        out.push_back(static_cast<Byte>((hi << 4) | lo));
    }
    return out;
}

Digest digest_from_hex(std::string_view hex) {
    return Digest::from(from_hex(hex));
}

bool contains_subsequence(ByteView haystack, ByteView needle) {
    if (needle.empty()) return true;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
           haystack.end();
}

} // namespace pcimkit
