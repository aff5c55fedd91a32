#pragma once

// Verifier router: one verify(proof, public_values, vk_id) entry point in
// front of pluggable backends. Two mock backends ship by default:
//
//   signature_receipt   payload = raw Ed25519 signature over
//                       hash("attest", encode(vk_id, public_values)) by the
//                       registered prover key. Small proof, trusted key.
//   transparent_reexec  payload = length-prefixed witness; the verifier
//                       re-runs the registered relation's check. No keys.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcimkit/attestation.hpp"
#include "pcimkit/bytes.hpp"
#include "pcimkit/params.hpp"
#include "pcimkit/relations.hpp"

namespace pcimkit {

enum class BackendKind : Byte { SignatureReceipt = 1, TransparentReexec = 2 };

std::string_view to_string(BackendKind kind);
std::optional<BackendKind> parse_backend_kind(std::string_view name);

struct VkId {
    Digest digest;
    auto operator<=>(const VkId&) const = default;
};

struct Proof {
    BackendKind backend_kind = BackendKind::SignatureReceipt;
    Bytes payload;

    bool operator==(const Proof&) const = default;
};

void encode_into(Encoder& enc, const Proof& p);

struct VkEntry {
    VkId id;
    BackendKind kind;
    RelationId relation_id;
    Bytes key_material;
};

VkId derive_vk_id(BackendKind kind, RelationId relation_id, ByteView key_material);

struct VerifierBackend {
    BackendKind kind;
    // Throws MalformedProof when the payload does not parse.
    std::function<bool(const VkEntry&, const ParamBundle&, ByteView payload, const RelationRegistry&)> verify;
};

struct RouteRow {
    VkId vk_id;
    BackendKind kind;
    RelationId relation_id;

    bool operator==(const RouteRow&) const = default;
};

class VerifierRouter {
public:
    VerifierRouter();

    void install_backend(VerifierBackend backend);

    // Throws UnknownRelation; InvalidArgument for a malformed signature key or a
    // transparent verifier over a relation whose witness is secret. Registering an identical entry twice returns the same id.
    VkId register_vk(BackendKind kind, RelationId relation_id, ByteView key_material,
                     const RelationRegistry& relations);

    // Throws UnknownVk, BackendMismatch, MalformedProof, VkIntegrity.
    bool verify(const Proof& proof, const ParamBundle& public_values, const VkId& vk_id,
                const RelationRegistry& relations) const;

    const VkEntry& entry(const VkId& id) const; // throws UnknownVk
    std::optional<VkId> find(BackendKind kind, RelationId relation_id, ByteView key_material) const;

    // Sorted by vk_id bytes.
    std::vector<RouteRow> route_table() const;

    // One line per entry: hex(vk_id) kind relation_id hex(key_material)
    std::string dump() const;
    // Throws VkIntegrity if a line's id does not match its contents.
    static VerifierRouter load_dump(std::string_view text, const RelationRegistry& relations);

private:
    std::map<VkId, VkEntry> entries_;
    std::map<BackendKind, VerifierBackend> backends_;
};

Digest receipt_digest(const VkId& vk_id, const ParamBundle& public_values);
Proof prove_signature_receipt(const SigningKey& key, const VkId& vk_id, const ParamBundle& public_values);
Proof prove_transparent(ByteView witness);

VerifierBackend signature_receipt_backend();
VerifierBackend transparent_reexec_backend();

} // namespace pcimkit
