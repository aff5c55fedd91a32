#include "pcimkit/router.hpp"

#include <sstream>

#include "pcimkit/error.hpp"
#include "pcimkit/hash.hpp"

namespace pcimkit {

std::string_view to_string(BackendKind kind) {
    switch (kind) {
    case BackendKind::SignatureReceipt: return "signature_receipt";
    case BackendKind::TransparentReexec: return "transparent_reexec";
    }
    return "unknown";
}

std::optional<BackendKind> parse_backend_kind(std::string_view name) {
    if (name == "signature_receipt") return BackendKind::SignatureReceipt;
    if (name == "transparent_reexec") return BackendKind::TransparentReexec;
    return std::nullopt;
}

void encode_into(Encoder& enc, const Proof& p) {
    enc.tag(TypeTag::Proof).u8(static_cast<Byte>(p.backend_kind)).bytes(p.payload);
}

VkId derive_vk_id(BackendKind kind, RelationId relation_id, ByteView key_material) {
    Encoder enc;
    enc.tag(TypeTag::VkEntry).u8(static_cast<Byte>(kind)).u32(relation_id.value).bytes(key_material);
    return VkId{hash(DomainTag::VkId, std::move(enc).finish())};
}

Digest receipt_digest(const VkId& vk_id, const ParamBundle& public_values) {
    Encoder enc;
    enc.tag(TypeTag::ReceiptStatement).digest(vk_id.digest);
    encode_into(enc, public_values);
    return hash(DomainTag::Attest, std::move(enc).finish());
}

Proof prove_signature_receipt(const SigningKey& key, const VkId& vk_id, const ParamBundle& public_values) {
    return Proof{BackendKind::SignatureReceipt, key.sign(receipt_digest(vk_id, public_values).view())};
}

Proof prove_transparent(ByteView witness) {
    Encoder enc;
    enc.bytes(witness);
    return Proof{BackendKind::TransparentReexec, std::move(enc).finish().bytes()};
}

VerifierBackend signature_receipt_backend() {
    return {BackendKind::SignatureReceipt,
            [](const VkEntry& e, const ParamBundle& pv, ByteView payload, const RelationRegistry&) {
                if (payload.size() != kSignatureSize) {
                    throw Error(ErrorCode::MalformedProof, "signature must be 64 octets");
                }
                VerifyKey key;
                std::copy(e.key_material.begin(), e.key_material.end(), key.bytes.begin());
                return verify_signature(key, receipt_digest(e.id, pv).view(), payload);
            }};
}

VerifierBackend transparent_reexec_backend() {
    return {BackendKind::TransparentReexec,
            [](const VkEntry& e, const ParamBundle& pv, ByteView payload, const RelationRegistry& relations) {
                Bytes witness;
                try {
                    Decoder dec(payload);
                    witness = dec.bytes();
                    dec.expect_done();
                } catch (const Error&) {
                    throw Error(ErrorCode::MalformedProof, "witness is not length-prefixed");
                }
                return relations.get(e.relation_id).check(pv, witness);
            }};
}

VerifierRouter::VerifierRouter() {
    install_backend(signature_receipt_backend());
    install_backend(transparent_reexec_backend());
}

void VerifierRouter::install_backend(VerifierBackend backend) {
    auto kind = backend.kind;
    backends_.insert_or_assign(kind, std::move(backend));
}

VkId VerifierRouter::register_vk(BackendKind kind, RelationId relation_id, ByteView key_material,
                                 const RelationRegistry& relations) {
    if (!relations.contains(relation_id)) {
        throw Error(ErrorCode::UnknownRelation, std::to_string(relation_id.value));
    }
    if (kind == BackendKind::TransparentReexec && relations.get(relation_id).witness_secret) {
        throw Error(ErrorCode::InvalidArgument, "relation " + std::to_string(relation_id.value) +
                                                    " has a secret witness; transparent_reexec would publish it");
    }
    if (kind == BackendKind::SignatureReceipt && key_material.size() != VerifyKey{}.bytes.size()) {
        throw Error(ErrorCode::InvalidArgument, "signature_receipt key must be a 32-octet verify key");
    }
    VkId id = derive_vk_id(kind, relation_id, key_material);
    entries_.try_emplace(id, VkEntry{id, kind, relation_id, Bytes(key_material.begin(), key_material.end())});
    return id;
}

const VkEntry& VerifierRouter::entry(const VkId& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        throw Error(ErrorCode::UnknownVk, to_hex(id.digest));
    }
    return it->second;
}

std::optional<VkId> VerifierRouter::find(BackendKind kind, RelationId relation_id, ByteView key_material) const {
    VkId id = derive_vk_id(kind, relation_id, key_material);
    if (entries_.count(id)) return id;
    return std::nullopt;
}

bool VerifierRouter::verify(const Proof& proof, const ParamBundle& public_values, const VkId& vk_id,
                            const RelationRegistry& relations) const {
    const VkEntry& e = entry(vk_id);
    if (proof.backend_kind != e.kind) {
        throw Error(ErrorCode::BackendMismatch,
                    std::string(to_string(proof.backend_kind)) + " proof for " + std::string(to_string(e.kind)) +
                        " key");
    }
    if (derive_vk_id(e.kind, e.relation_id, e.key_material) != vk_id) {
        throw Error(ErrorCode::VkIntegrity, to_hex(vk_id.digest));
    }
    auto it = backends_.find(e.kind);
    if (it == backends_.end()) {
        throw Error(ErrorCode::BackendMismatch, "no backend installed");
    }
    return it->second.verify(e, public_values, proof.payload, relations);
}

std::vector<RouteRow> VerifierRouter::route_table() const {
    std::vector<RouteRow> rows;
    for (const auto& [id, e] : entries_) rows.push_back({id, e.kind, e.relation_id});
    return rows;
}

std::string VerifierRouter::dump() const {
    std::ostringstream out;
    for (const auto& [id, e] : entries_) {
        out << to_hex(id.digest) << ' ' << to_string(e.kind) << ' ' << e.relation_id.value << ' '
            << (e.key_material.empty() ? std::string("-") : to_hex(e.key_material)) << '\n';
    }
    return out.str();
}

VerifierRouter VerifierRouter::load_dump(std::string_view text, const RelationRegistry& relations) {
    VerifierRouter router;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string id_hex, kind_name, key_hex;
        std::uint32_t relation = 0;
        if (!(fields >> id_hex >> kind_name >> relation)) {
            throw Error(ErrorCode::DecodeFailure, "registry line " + std::to_string(line_no));
        }
        if (!(fields >> key_hex)) {
            throw Error(ErrorCode::DecodeFailure, "registry line " + std::to_string(line_no));
        }
        if (key_hex == "-") key_hex.clear();
        auto kind = parse_backend_kind(kind_name);
        if (!kind) {
            throw Error(ErrorCode::DecodeFailure, "unknown backend '" + kind_name + "'");
        }
        VkId expected{digest_from_hex(id_hex)};
        VkId got = router.register_vk(*kind, RelationId{relation}, from_hex(key_hex), relations);
        if (got != expected) {
            throw Error(ErrorCode::VkIntegrity, "registry line " + std::to_string(line_no));
        }
    }
    return router;
}

} // namespace pcimkit
