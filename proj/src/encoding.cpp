#include "pcimkit/encoding.hpp"

#include "pcimkit/error.hpp"

namespace pcimkit {

namespace {

void put_le(Bytes& out, std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) {
        out.push_back(static_cast<Byte>(v >> (8 * i)));
    }
}

std::uint32_t checked_length(std::size_t n) {
    if (static_cast<std::uint64_t>(n) > kMaxEncodedLength) {
        throw Error(ErrorCode::EncodingOverflow, "length " + std::to_string(n));
    }
    return static_cast<std::uint32_t>(n);
}

} // namespace

Encoder& Encoder::tag(TypeTag t) {
    out_.push_back(static_cast<Byte>(t));
    return *this;
}

Encoder& Encoder::u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
}

Encoder& Encoder::u32(std::uint32_t v) {
    put_le(out_, v, 4);
    return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
    put_le(out_, v, 8);
    return *this;
}

Encoder& Encoder::bytes(ByteView v) {
    u32(checked_length(v.size()));
    out_.insert(out_.end(), v.begin(), v.end());
    return *this;
}

Encoder& Encoder::text(std::string_view v) {
    return bytes(ByteView(reinterpret_cast<const Byte*>(v.data()), v.size()));
}

Encoder& Encoder::digest(const Digest& d) {
    out_.insert(out_.end(), d.bytes.begin(), d.bytes.end());
    return *this;
}

Encoder& Encoder::count(std::size_t n) {
    return u32(checked_length(n));
}

Encoder& Encoder::nested(const CanonicalBytes& sub) {
    out_.insert(out_.end(), sub.bytes().begin(), sub.bytes().end());
    return *this;
}

CanonicalBytes Encoder::finish() && {
    return CanonicalBytes(std::move(out_));
}

ByteView Decoder::take(std::size_t n) {
    if (in_.size() - pos_ < n) {
        throw Error(ErrorCode::DecodeFailure, "truncated input");
    }
    ByteView v = in_.subspan(pos_, n);
    pos_ += n;
    return v;
}

void Decoder::expect_tag(TypeTag t) {
    auto got = u8();
    if (got != static_cast<Byte>(t)) {
        throw Error(ErrorCode::DecodeFailure, "unexpected type tag " + std::to_string(got));
    }
}

TypeTag Decoder::peek_tag() const {
    if (pos_ >= in_.size()) {
        throw Error(ErrorCode::DecodeFailure, "truncated input");
    }
    return static_cast<TypeTag>(in_[pos_]);
}

std::uint8_t Decoder::u8() {
    return take(1)[0];
}

std::uint32_t Decoder::u32() {
    auto v = take(4);
    std::uint32_t r = 0;
    for (int i = 3; i >= 0; --i) r = (r << 8) | v[i];
    return r;
}

std::uint64_t Decoder::u64() {
    auto v = take(8);
    std::uint64_t r = 0;
    for (int i = 7; i >= 0; --i) r = (r << 8) | v[i];
    return r;
}

Bytes Decoder::bytes() {
    auto n = u32();
    auto v = take(n);
    return Bytes(v.begin(), v.end());
}

std::string Decoder::text() {
    auto b = bytes();
    return std::string(b.begin(), b.end());
}

Digest Decoder::digest() {
    return Digest::from(take(kDigestSize));
}

std::size_t Decoder::count() {
    auto n = u32();
    // each element occupies at least one octet
    if (n > in_.size() - pos_) {
        throw Error(ErrorCode::DecodeFailure, "element count exceeds input");
    }
    return n;
}

void Decoder::expect_done() const {
    if (!done()) {
        throw Error(ErrorCode::DecodeFailure, "trailing octets");
    }
}

} // namespace pcimkit
