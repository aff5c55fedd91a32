#pragma once

// Canonical, injective byte encoding shared by every hashed or signed value.
//
//   integers      fixed-width little-endian (u8 / u32 / u64)
//   octet strings 4-octet LE length, then the octets
//   lists         4-octet LE element count, then the elements
//   digests       32 raw octets (fixed width, no prefix)
//   structs       1-octet TypeTag, then fields in declaration order
//
// Nested structs carry their own tag, so an encoding can be parsed without
// outside context.

#include <cstdint>
#include <string>
#include <string_view>

#include "pcimkit/bytes.hpp"

namespace pcimkit {

enum class TypeTag : Byte {
    ParamBundle = 0x01,
    IdentifierInput = 0x02,
    Message = 0x03,
    Commitment = 0x04,
    Identifier = 0x05,
    FinalityTag = 0x06,
    AttestedBody = 0x07,
    Attestation = 0x08,
    Proof = 0x09,
    Pcm = 0x0a,
    Pcim = 0x0b,
    VkEntry = 0x0c,
    ReceiptStatement = 0x0d,
    BlockHeader = 0x0e,
    NullifierInput = 0x0f,
    Transcript = 0x10,
    UpdateCommand = 0x11,
    CommandList = 0x12,
    ConsumptionWitness = 0x13,
    InjectionWitness = 0x14,
    Receipt = 0x15,
};

inline constexpr std::uint64_t kMaxEncodedLength = 0xffffffffULL;

class Encoder;

// Output of an Encoder. Only Encoder can mint one.
class CanonicalBytes {
public:
    CanonicalBytes() = default;

    const Bytes& bytes() const { return bytes_; }
    ByteView view() const { return bytes_; }
    std::size_t size() const { return bytes_.size(); }

    bool operator==(const CanonicalBytes&) const = default;

private:
    friend class Encoder;
    explicit CanonicalBytes(Bytes b) : bytes_(std::move(b)) {}
    Bytes bytes_;
};

class Encoder {
public:
    Encoder& tag(TypeTag t);
    Encoder& u8(std::uint8_t v);
    Encoder& u32(std::uint32_t v);
    Encoder& u64(std::uint64_t v);
    Encoder& bytes(ByteView v);
    Encoder& text(std::string_view v);
    Encoder& digest(const Digest& d);
    Encoder& count(std::size_t n);
    // Splices an already-canonical sub-encoding.
    Encoder& nested(const CanonicalBytes& sub);

    CanonicalBytes finish() &&;

private:
    Bytes out_;
};

// Strict reader. Every failure throws Error(DecodeFailure).
class Decoder {
public:
    explicit Decoder(ByteView input) : in_(input) {}

    void expect_tag(TypeTag t);
    TypeTag peek_tag() const;
    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    Bytes bytes();
    std::string text();
    Digest digest();
    std::size_t count();

    bool done() const { return pos_ == in_.size(); }
    void expect_done() const;

private:
    ByteView take(std::size_t n);
    ByteView in_;
    std::size_t pos_ = 0;
};

} // namespace pcimkit
