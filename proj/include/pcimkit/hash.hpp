#pragma once

// Domain-separated SHA-256 (libsodium). Digest = SHA-256(le32(|tag|) || tag || payload).

#include <cstdint>
#include <optional>
#include <string_view>

#include "pcimkit/bytes.hpp"
#include "pcimkit/encoding.hpp"

namespace pcimkit {

enum class DomainTag { Ident, Commit, Nullifier, Attest, VkId, Root };

std::string_view tag_name(DomainTag tag);
std::optional<DomainTag> parse_domain_tag(std::string_view name);

Digest hash(DomainTag tag, ByteView payload);
inline Digest hash(DomainTag tag, const CanonicalBytes& payload) { return hash(tag, payload.view()); }
// Throws UnknownDomainTag for anything outside the registered set.
Digest hash(std::string_view tag, ByteView payload);

struct Identifier {
    Digest digest;
    auto operator<=>(const Identifier&) const = default;
};

CanonicalBytes encode_identifier_input(std::uint32_t domain_id, ByteView sender, std::uint64_t sequence);
Identifier derive_identifier(std::uint32_t domain_id, ByteView sender, std::uint64_t sequence);

} // namespace pcimkit
