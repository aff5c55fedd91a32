#include "pcimkit/attestation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <sodium.h>

#include "pcimkit/error.hpp"
#include "pcimkit/hash.hpp"

namespace pcimkit {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("libsodium initialisation failed");
}

} // namespace

SigningKey SigningKey::from_seed(const Digest& seed) {
    ensure_sodium();
    SigningKey k;
    crypto_sign_seed_keypair(k.public_.bytes.data(), k.secret_.data(), seed.bytes.data());
    return k;
}

Bytes SigningKey::sign(ByteView message) const {
    Bytes sig(kSignatureSize);
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
    return sig;
}

bool verify_signature(const VerifyKey& key, ByteView message, ByteView signature) {
    ensure_sodium();
    if (signature.size() != kSignatureSize) return false;
    return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                       key.bytes.data()) == 0;
}

void GuardianSet::validate() const {
    if (members.empty() || members.size() > 255) {
        throw Error(ErrorCode::InvalidGuardianSet, "member count out of range");
    }
    if (threshold < 1 || threshold > members.size()) {
        throw Error(ErrorCode::InvalidGuardianSet, "threshold out of range");
    }
    std::set<VerifyKey> seen(members.begin(), members.end());
    if (seen.size() != members.size()) {
        throw Error(ErrorCode::InvalidGuardianSet, "duplicate member key");
    }
}

GuardianCommittee GuardianCommittee::generate(std::uint32_t set_id, std::size_t n, std::uint8_t threshold,
                                              Rng& rng) {
    GuardianCommittee c;
    c.set.set_id = set_id;
    c.set.threshold = threshold;
    for (std::size_t i = 0; i < n; ++i) {
        c.keys.push_back(SigningKey::from_seed(draw_digest(rng)));
        c.set.members.push_back(c.keys.back().verify_key());
    }
    c.set.validate();
    return c;
}

void encode_into(Encoder& enc, const Attestation& a) {
    enc.tag(TypeTag::Attestation).u32(a.set_id).count(a.signatures.size());
    for (const auto& s : a.signatures) {
        enc.u8(s.member_index).bytes(s.signature);
    }
    enc.digest(a.signed_digest);
}

Attestation attest(const GuardianSet& set, std::span<const Signer> signers, const CanonicalBytes& message_bytes) {
    std::map<std::uint8_t, const SigningKey*> by_index;
    for (const auto& s : signers) {
        if (s.key == nullptr || s.member_index >= set.members.size()) continue;
        if (s.key->verify_key() != set.members[s.member_index]) continue;
        by_index.emplace(s.member_index, s.key);
    }
    if (by_index.size() < set.threshold) {
        throw Error(ErrorCode::InsufficientSigners,
                    std::to_string(by_index.size()) + " of " + std::to_string(set.threshold));
    }

    Attestation a;
    a.set_id = set.set_id;
    a.signed_digest = hash(DomainTag::Attest, message_bytes);
    for (const auto& [index, key] : by_index) {
        a.signatures.push_back({index, key->sign(a.signed_digest.view())});
    }
    return a;
}

bool verify_attestation(const GuardianSet& set, const CanonicalBytes& message_bytes, const Attestation& a) {
    if (a.set_id != set.set_id) {
        throw Error(ErrorCode::SetMismatch,
                    std::to_string(a.set_id) + " vs " + std::to_string(set.set_id));
    }
    for (std::size_t i = 0; i < a.signatures.size(); ++i) {
        if (a.signatures[i].member_index >= set.members.size()) return false;
        if (i > 0 && a.signatures[i].member_index <= a.signatures[i - 1].member_index) return false;
    }
    const Digest expected = hash(DomainTag::Attest, message_bytes);
    if (a.signed_digest != expected) return false;
    if (a.signatures.size() < set.threshold) return false;

    std::size_t valid = 0;
    for (const auto& s : a.signatures) {
        if (verify_signature(set.members[s.member_index], expected.view(), s.signature)) {
            if (++valid >= set.threshold) return true;
        }
    }
    return false;
}

} // namespace pcimkit
