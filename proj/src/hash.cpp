#include "pcimkit/hash.hpp"

#include <array>

#include <sodium.h>

#include "pcimkit/error.hpp"

namespace pcimkit {

namespace {

constexpr std::array<std::pair<DomainTag, std::string_view>, 6> kTags{{
    {DomainTag::Ident, "ident"},
    {DomainTag::Commit, "commit"},
    {DomainTag::Nullifier, "nullifier"},
    {DomainTag::Attest, "attest"},
    {DomainTag::VkId, "vkid"},
    {DomainTag::Root, "root"},
}};

} // namespace

std::string_view tag_name(DomainTag tag) {
    for (const auto& [t, name] : kTags) {
        if (t == tag) return name;
    }
    return {};
}

std::optional<DomainTag> parse_domain_tag(std::string_view name) {
    for (const auto& [t, n] : kTags) {
        if (n == name) return t;
    }
    return std::nullopt;
}

Digest hash(DomainTag tag, ByteView payload) {
    auto name = tag_name(tag);
    std::array<Byte, 4> len{};
    for (int i = 0; i < 4; ++i) len[i] = static_cast<Byte>(name.size() >> (8 * i));

    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    crypto_hash_sha256_update(&st, len.data(), len.size());
    crypto_hash_sha256_update(&st, reinterpret_cast<const unsigned char*>(name.data()), name.size());
    crypto_hash_sha256_update(&st, payload.data(), payload.size());
    Digest out;
    crypto_hash_sha256_final(&st, out.bytes.data());
    return out;
}

Digest hash(std::string_view tag, ByteView payload) {
    auto t = parse_domain_tag(tag);
    if (!t) {
        throw Error(ErrorCode::UnknownDomainTag, std::string(tag));
    }
    return hash(*t, payload);
}

CanonicalBytes encode_identifier_input(std::uint32_t domain_id, ByteView sender, std::uint64_t sequence) {
    Encoder enc;
    enc.tag(TypeTag::IdentifierInput).u32(domain_id).bytes(sender).u64(sequence);
    return std::move(enc).finish();
}

Identifier derive_identifier(std::uint32_t domain_id, ByteView sender, std::uint64_t sequence) {
    return Identifier{hash(DomainTag::Ident, encode_identifier_input(domain_id, sender, sequence))};
}

} // namespace pcimkit
