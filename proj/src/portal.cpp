#include "pcimkit/portal.hpp"

#include "pcimkit/error.hpp"

namespace pcimkit {

namespace {

FinalityTag decode_finality_tag(Decoder& dec) {
    dec.expect_tag(TypeTag::FinalityTag);
    FinalityTag t;
    t.domain_id = dec.u32();
    t.height = dec.u64();
    t.block_hash = dec.digest();
    return t;
}

Attestation decode_attestation(Decoder& dec) {
    dec.expect_tag(TypeTag::Attestation);
    Attestation a;
    a.set_id = dec.u32();
    auto n = dec.count();
    for (std::size_t i = 0; i < n; ++i) {
        MemberSignature s;
        s.member_index = dec.u8();
        s.signature = dec.bytes();
        a.signatures.push_back(std::move(s));
    }
    a.signed_digest = dec.digest();
    return a;
}

Proof decode_proof(Decoder& dec) {
    dec.expect_tag(TypeTag::Proof);
    auto kind = dec.u8();
    if (kind != static_cast<Byte>(BackendKind::SignatureReceipt) &&
        kind != static_cast<Byte>(BackendKind::TransparentReexec)) {
        throw Error(ErrorCode::DecodeFailure, "unknown backend kind");
    }
    return Proof{static_cast<BackendKind>(kind), dec.bytes()};
}

Message decode_message(Decoder& dec) {
    dec.expect_tag(TypeTag::Message);
    Message m;
    m.origin_domain = dec.u32();
    m.sender = dec.bytes();
    m.dest_domain = dec.u32();
    m.relation_id = RelationId{dec.u32()};
    m.body = decode_param_bundle(dec);
    return m;
}

void encode_pcm_into(Encoder& enc, const Pcm& pcm) {
    enc.tag(TypeTag::Pcm);
    encode_into(enc, pcm.m);
    enc.tag(TypeTag::Commitment).digest(pcm.commitment.digest);
    enc.tag(TypeTag::Identifier).digest(pcm.identifier.digest);
    encode_into(enc, pcm.public_values);
    encode_into(enc, pcm.proof);
    enc.digest(pcm.vk_id.digest).digest(pcm.pre_root.digest).digest(pcm.post_root.digest);
}

Pcm decode_pcm(Decoder& dec) {
    dec.expect_tag(TypeTag::Pcm);
    Pcm pcm;
    pcm.m = decode_message(dec);
    dec.expect_tag(TypeTag::Commitment);
    pcm.commitment.digest = dec.digest();
    dec.expect_tag(TypeTag::Identifier);
    pcm.identifier.digest = dec.digest();
    pcm.public_values = decode_param_bundle(dec);
    pcm.proof = decode_proof(dec);
    pcm.vk_id.digest = dec.digest();
    pcm.pre_root.digest = dec.digest();
    pcm.post_root.digest = dec.digest();
    return pcm;
}

bool structurally_valid(const Pcm& pcm, std::uint32_t portal_domain) {
    if (pcm.m.dest_domain != portal_domain) return false;
    auto seq = message_sequence(pcm.m);
    if (!seq) return false;
    return derive_identifier(pcm.m.origin_domain, pcm.m.sender, *seq) == pcm.identifier;
}

// Opening matches the commitment and the public values, and any roots the
// public values mention are the ones the PCM would install.
bool binding_holds(const Pcm& pcm, const Opening& opening) {
    if (!verify_opening(pcm.commitment, opening)) return false;
    if (opening.params != pcm.public_values) return false;
    const Bytes* pre = pcm.public_values.find("pre_root");
    const Bytes* post = pcm.public_values.find("post_root");
    if (!pre && !post) return pcm.pre_root == pcm.post_root;
    if (!pre || !post || pre->size() != kDigestSize || post->size() != kDigestSize) return false;
    return Digest::from(*pre) == pcm.pre_root.digest && Digest::from(*post) == pcm.post_root.digest;
}

bool proof_holds(const Pcm& pcm, const PortalContext& ctx) {
    try {
        if (ctx.router.entry(pcm.vk_id).relation_id != pcm.m.relation_id) return false;
        return ctx.router.verify(pcm.proof, pcm.public_values, pcm.vk_id, ctx.relations);
    } catch (const Error&) {
        return false;
    }
}

Acceptance run_pcm_checks(const Pcm& pcm, const Opening& opening, PortalState state, const PortalContext& ctx) {
    if (state.replay_registry.count(pcm.identifier)) {
        return {AcceptanceResult::reject(Reason::ReplayDetected), std::move(state)};
    }
    if (!binding_holds(pcm, opening)) {
        return {AcceptanceResult::reject(Reason::BindingMismatch), std::move(state)};
    }
    if (!proof_holds(pcm, ctx)) {
        return {AcceptanceResult::reject(Reason::ProofInvalid), std::move(state)};
    }
    if (pcm.pre_root != state.current_root) {
        return {AcceptanceResult::reject(Reason::RootMismatch), std::move(state)};
    }
    state.replay_registry.insert(pcm.identifier);
    state.current_root = pcm.post_root;
    return {AcceptanceResult::ok(), std::move(state)};
}

} // namespace

Bytes encode_u64_le(std::uint64_t v) {
    Bytes out(8);
    for (int i = 0; i < 8; ++i) out[i] = static_cast<Byte>(v >> (8 * i));
    return out;
}

std::optional<std::uint64_t> message_sequence(const Message& m) {
    const Bytes* seq = m.body.find(kSeqLabel);
    if (!seq || seq->size() != 8) return std::nullopt;
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | (*seq)[i];
    return v;
}

void encode_into(Encoder& enc, const Message& m) {
    enc.tag(TypeTag::Message).u32(m.origin_domain).bytes(m.sender).u32(m.dest_domain).u32(m.relation_id.value);
    encode_into(enc, m.body);
}

CanonicalBytes encode(const Message& m) {
    Encoder enc;
    encode_into(enc, m);
    return std::move(enc).finish();
}

CanonicalBytes encode(const Pcm& pcm) {
    Encoder enc;
    encode_pcm_into(enc, pcm);
    return std::move(enc).finish();
}

CanonicalBytes encode(const Pcim& pcim) {
    Encoder enc;
    enc.tag(TypeTag::Pcim);
    encode_pcm_into(enc, pcim.pcm);
    encode_into(enc, pcim.finality_tag);
    encode_into(enc, pcim.attestation);
    return std::move(enc).finish();
}

Message decode_message(ByteView bytes) {
    Decoder dec(bytes);
    auto m = decode_message(dec);
    dec.expect_done();
    return m;
}

Pcm decode_pcm(ByteView bytes) {
    Decoder dec(bytes);
    auto pcm = decode_pcm(dec);
    dec.expect_done();
    return pcm;
}

Pcim decode_pcim(ByteView bytes) {
    Decoder dec(bytes);
    dec.expect_tag(TypeTag::Pcim);
    Pcim p;
    p.pcm = decode_pcm(dec);
    p.finality_tag = decode_finality_tag(dec);
    p.attestation = decode_attestation(dec);
    dec.expect_done();
    return p;
}

CanonicalBytes attested_body(const Pcm& pcm, const FinalityTag& tag) {
    Encoder enc;
    enc.tag(TypeTag::AttestedBody);
    encode_into(enc, pcm.m);
    enc.tag(TypeTag::Commitment).digest(pcm.commitment.digest);
    enc.tag(TypeTag::Identifier).digest(pcm.identifier.digest);
    encode_into(enc, tag);
    return std::move(enc).finish();
}

std::string_view to_string(Reason r) {
    switch (r) {
    case Reason::OK: return "OK";
    case Reason::ReplayDetected: return "ReplayDetected";
    case Reason::OriginInvalid: return "OriginInvalid";
    case Reason::NotFinal: return "NotFinal";
    case Reason::BindingMismatch: return "BindingMismatch";
    case Reason::ProofInvalid: return "ProofInvalid";
    case Reason::RootMismatch: return "RootMismatch";
    case Reason::MalformedMessage: return "MalformedMessage";
    }
    return "Unknown";
}

std::optional<Reason> parse_reason(std::string_view name) {
    for (auto r : kAllReasons) {
        if (to_string(r) == name) return r;
    }
    return std::nullopt;
}

Acceptance accept_pcm(const Pcm& pcm, const Opening& opening, PortalState state, const PortalContext& ctx) {
    if (!structurally_valid(pcm, ctx.domain_id)) {
        return {AcceptanceResult::reject(Reason::MalformedMessage), std::move(state)};
    }
    return run_pcm_checks(pcm, opening, std::move(state), ctx);
}

Acceptance accept_pcim(const Pcim& pcim, const Opening& opening, PortalState state, const PortalContext& ctx) {
    const Pcm& pcm = pcim.pcm;
    if (!structurally_valid(pcm, ctx.domain_id) || pcim.finality_tag.domain_id != pcm.m.origin_domain) {
        return {AcceptanceResult::reject(Reason::MalformedMessage), std::move(state)};
    }

    auto set = ctx.guardian_sets.find(pcim.attestation.set_id);
    if (set == ctx.guardian_sets.end() ||
        !verify_attestation(set->second, attested_body(pcm, pcim.finality_tag), pcim.attestation)) {
        return {AcceptanceResult::reject(Reason::OriginInvalid), std::move(state)};
    }

    auto chain = ctx.sender_chains.find(pcim.finality_tag.domain_id);
    if (chain == ctx.sender_chains.end() || !is_final(chain->second, pcim.finality_tag)) {
        return {AcceptanceResult::reject(Reason::NotFinal), std::move(state)};
    }

    return run_pcm_checks(pcm, opening, std::move(state), ctx);
}

Pcim relay(Pcim pcim, const Mutator& mutator) {
    if (!mutator) return pcim;
    return mutator(std::move(pcim));
}

std::string acceptance_log_line(const Identifier& id, Reason reason, const StateRoot& pre_root,
                                const StateRoot& post_root) {
    std::string line = to_hex(id.digest);
    line += ' ';
    line += to_string(reason);
    line += ' ';
    line += to_hex(pre_root.digest);
    line += ' ';
    line += to_hex(post_root.digest);
    return line;
}

} // namespace pcimkit
