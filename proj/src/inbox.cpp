#include "pcimkit/inbox.hpp"

#include <algorithm>

#include "pcimkit/error.hpp"

namespace pcimkit {

Nullifier derive_nullifier(const Identifier& id, ByteView secret) {
    Encoder enc;
    enc.tag(TypeTag::NullifierInput).digest(id.digest).bytes(secret);
    return Nullifier{hash(DomainTag::Nullifier, std::move(enc).finish())};
}

ParamBundle consumption_bundle(ByteView secret, const ParamBundle& public_params) {
    ParamBundle b;
    b.add(std::string(kSecretLabel), Bytes(secret.begin(), secret.end()));
    for (const auto& e : public_params.entries()) b.add(e.label, e.value);
    return b;
}

Commitment commit_secret(ByteView secret, const ParamBundle& public_params, const Nonce& nonce) {
    return commit(consumption_bundle(secret, public_params), nonce);
}

CanonicalBytes encode(const ConsumptionTranscript& t) {
    Encoder enc;
    enc.tag(TypeTag::Transcript).digest(t.identifier.digest).digest(t.nullifier.digest);
    encode_into(enc, t.disclosed_outputs);
    return std::move(enc).finish();
}

CanonicalBytes encode(const Receipt& r) {
    Encoder enc;
    enc.tag(TypeTag::Receipt);
    encode_into(enc, r.proof);
    encode_into(enc, r.public_values);
    enc.digest(r.vk_id.digest);
    return std::move(enc).finish();
}

ConsumptionTranscript decode_transcript(ByteView bytes) {
    Decoder dec(bytes);
    dec.expect_tag(TypeTag::Transcript);
    ConsumptionTranscript t;
    t.identifier.digest = dec.digest();
    t.nullifier.digest = dec.digest();
    t.disclosed_outputs = decode_param_bundle(dec);
    dec.expect_done();
    return t;
}

InboxState inject(InboxEntry entry, InboxState state) {
    if (state.entries.count(entry.identifier)) {
        throw Error(ErrorCode::DuplicateEntry, to_hex(entry.identifier.digest));
    }
    auto id = entry.identifier;
    state.entries.emplace(id, std::move(entry));
    return state;
}

const InboxEntry& lookup(const InboxState& state, const Identifier& id) {
    auto it = state.entries.find(id);
    if (it == state.entries.end()) {
        throw Error(ErrorCode::NotFound, to_hex(id.digest));
    }
    return it->second;
}

Consumption consume(const Identifier& id, ByteView secret, const Nonce& nonce, InboxState state) {
    const InboxEntry& entry = lookup(state, id);

    bool opens = false;
    try {
        opens = commit_secret(secret, entry.public_params, nonce) == entry.secret_commitment;
    } catch (const Error&) {
        opens = false;
    }
    if (!opens) {
        throw Error(ErrorCode::WrongSecret, to_hex(id.digest));
    }

    Nullifier nf = derive_nullifier(id, secret);
    if (state.nullifiers.count(nf)) {
        throw Error(ErrorCode::AlreadyConsumed, to_hex(nf.digest));
    }

    ConsumptionTranscript t{id, nf, {}};
    for (const auto& e : entry.public_params.entries()) {
        const auto& schema = state.disclosure_schema;
        if (!schema || std::find(schema->begin(), schema->end(), e.label) != schema->end()) {
            t.disclosed_outputs.add(e.label, e.value);
        }
    }
    state.nullifiers.insert(nf);
    return {std::move(t), std::move(state)};
}

ParamBundle receipt_public_values(const ConsumptionTranscript& t) {
    ParamBundle pv;
    pv.add("identifier", t.identifier.digest).add("nullifier", t.nullifier.digest);
    for (const auto& e : t.disclosed_outputs.entries()) pv.add("out." + e.label, e.value);
    return pv;
}

Receipt export_receipt(const ConsumptionTranscript& t, const SigningKey* prover, const VerifierRouter& router) {
    if (prover == nullptr) {
        throw Error(ErrorCode::NoReceiptKey, "no prover key");
    }
    auto vk = router.find(BackendKind::SignatureReceipt, kConsumptionReceipt, prover->verify_key().bytes);
    if (!vk) {
        throw Error(ErrorCode::NoReceiptKey, "prover key not registered for the consumption relation");
    }
    Receipt r;
    r.public_values = receipt_public_values(t);
    r.vk_id = *vk;
    r.proof = prove_signature_receipt(*prover, *vk, r.public_values);
    return r;
}

Bytes encode_consumption_witness(const Identifier& id, ByteView secret) {
    Encoder enc;
    enc.tag(TypeTag::ConsumptionWitness).digest(id.digest).bytes(secret);
    return std::move(enc).finish().bytes();
}

Bytes encode_injection_witness(const Nonce& nonce, ByteView secret) {
    Encoder enc;
    enc.tag(TypeTag::InjectionWitness).digest(nonce).bytes(secret);
    return std::move(enc).finish().bytes();
}

RelationDescriptor consumption_receipt_relation() {
    RelationDescriptor d;
    d.id = kConsumptionReceipt;
    d.name = "private-consumption";
    d.witness_secret = true;
    d.check = [](const ParamBundle& pv, ByteView witness) {
        try {
            Decoder dec(witness);
            dec.expect_tag(TypeTag::ConsumptionWitness);
            Identifier id{dec.digest()};
            Bytes secret = dec.bytes();
            dec.expect_done();
            const Bytes* pid = pv.find("identifier");
            const Bytes* pnf = pv.find("nullifier");
            if (!pid || !pnf || pid->size() != kDigestSize || pnf->size() != kDigestSize) return false;
            const auto& entries = pv.entries();
            for (std::size_t i = 2; i < entries.size(); ++i) {
                if (!entries[i].label.starts_with("out.")) return false;
            }
            return Digest::from(*pid) == id.digest && Digest::from(*pnf) == derive_nullifier(id, secret).digest;
        } catch (const Error&) {
            return false;
        }
    };
    return d;
}

ParamBundle injection_public_values(const Commitment& secret_commitment, const ParamBundle& public_params) {
    ParamBundle pv;
    pv.add(std::string(kSecretCommitmentLabel), secret_commitment.digest);
    for (const auto& e : public_params.entries()) pv.add(e.label, e.value);
    return pv;
}

std::optional<InboxEntry> entry_from_injection(const Identifier& id, const ParamBundle& public_values) {
    const auto& entries = public_values.entries();
    if (entries.empty() || entries.front().label != kSecretCommitmentLabel ||
        entries.front().value.size() != kDigestSize) {
        return std::nullopt;
    }
    InboxEntry e;
    e.identifier = id;
    e.secret_commitment.digest = Digest::from(entries.front().value);
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].label == kSecretLabel) return std::nullopt;
        e.public_params.add(entries[i].label, entries[i].value);
    }
    return e;
}

RelationDescriptor inbox_injection_relation() {
    RelationDescriptor d;
    d.id = kInboxInjection;
    d.name = "inbox-injection";
    d.witness_secret = true;
    d.check = [](const ParamBundle& pv, ByteView witness) {
        try {
            auto entry = entry_from_injection(Identifier{}, pv);
            if (!entry) return false;
            Decoder dec(witness);
            dec.expect_tag(TypeTag::InjectionWitness);
            Nonce nonce = dec.digest();
            Bytes secret = dec.bytes();
            dec.expect_done();
            return commit_secret(secret, entry->public_params, nonce) == entry->secret_commitment;
        } catch (const Error&) {
            return false;
        }
    };
    return d;
}

void register_inbox_relations(RelationRegistry& registry) {
    registry.register_relation(consumption_receipt_relation());
    registry.register_relation(inbox_injection_relation());
}

} // namespace pcimkit
