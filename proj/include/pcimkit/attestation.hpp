#pragma once

// t-of-n guardian attestation over canonical message bytes. Members sign
// hash("attest", message_bytes) with Ed25519 (libsodium).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pcimkit/bytes.hpp"
#include "pcimkit/encoding.hpp"
#include "pcimkit/rng.hpp"

namespace pcimkit {

inline constexpr std::size_t kSignatureSize = 64;

struct VerifyKey {
    std::array<Byte, 32> bytes{};
    auto operator<=>(const VerifyKey&) const = default;
};

class SigningKey {
public:
    static SigningKey from_seed(const Digest& seed);

    const VerifyKey& verify_key() const { return public_; }
    Bytes sign(ByteView message) const;

private:
    std::array<Byte, 64> secret_{};
    VerifyKey public_;
};

bool verify_signature(const VerifyKey& key, ByteView message, ByteView signature);

struct GuardianSet {
    std::uint32_t set_id = 0;
    std::vector<VerifyKey> members;
    std::uint8_t threshold = 1;

    // Throws InvalidGuardianSet: needs 1 <= threshold <= |members| <= 255, distinct keys.
    void validate() const;

    static std::uint8_t default_threshold(std::size_t n) {
        return static_cast<std::uint8_t>(2 * n / 3 + 1);
    }
};

// A guardian set together with every member's signing key (simulation only).
struct GuardianCommittee {
    GuardianSet set;
    std::vector<SigningKey> keys;

    static GuardianCommittee generate(std::uint32_t set_id, std::size_t n, std::uint8_t threshold, Rng& rng);
};

struct MemberSignature {
    std::uint8_t member_index = 0;
    Bytes signature;

    bool operator==(const MemberSignature&) const = default;
};

struct Attestation {
    std::uint32_t set_id = 0;
    std::vector<MemberSignature> signatures;
    Digest signed_digest;

    bool operator==(const Attestation&) const = default;
};

void encode_into(Encoder& enc, const Attestation& a);

struct Signer {
    std::uint8_t member_index;
    const SigningKey* key;
};

// Throws InsufficientSigners unless at least `threshold` distinct signers hold
// the member key at their index.
Attestation attest(const GuardianSet& set, std::span<const Signer> signers, const CanonicalBytes& message_bytes);

// Throws SetMismatch if a.set_id != set.set_id. Duplicate or unordered member
// indices are rejected before any signature is checked.
bool verify_attestation(const GuardianSet& set, const CanonicalBytes& message_bytes, const Attestation& a);

} // namespace pcimkit
