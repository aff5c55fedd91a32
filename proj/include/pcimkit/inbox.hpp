#pragma once

// Private consumption. An inbox entry holds a commitment to
// (secret || public params); whoever opens it consumes the entry once,
// tracked by nullifier = hash("nullifier", encode(identifier, secret)).
// Transcripts disclose the nullifier and the declared outputs only.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pcimkit/attestation.hpp"
#include "pcimkit/commitment.hpp"
#include "pcimkit/hash.hpp"
#include "pcimkit/params.hpp"
#include "pcimkit/relations.hpp"
#include "pcimkit/router.hpp"

namespace pcimkit {

inline constexpr std::string_view kSecretLabel = "secret";
inline constexpr std::string_view kSecretCommitmentLabel = "secret_commitment";

struct Nullifier {
    Digest digest;
    auto operator<=>(const Nullifier&) const = default;
};

Nullifier derive_nullifier(const Identifier& id, ByteView secret);

// ("secret", secret) followed by the public params.
ParamBundle consumption_bundle(ByteView secret, const ParamBundle& public_params);
Commitment commit_secret(ByteView secret, const ParamBundle& public_params, const Nonce& nonce);

struct InboxEntry {
    Identifier identifier;
    Commitment secret_commitment;
    ParamBundle public_params;

    bool operator==(const InboxEntry&) const = default;
};

struct ConsumptionTranscript {
    Identifier identifier;
    Nullifier nullifier;
    ParamBundle disclosed_outputs;

    bool operator==(const ConsumptionTranscript&) const = default;
};

CanonicalBytes encode(const ConsumptionTranscript& t);
ConsumptionTranscript decode_transcript(ByteView bytes);

struct InboxState {
    std::map<Identifier, InboxEntry> entries;
    std::set<Nullifier> nullifiers;
    // Labels of public params a transcript may disclose; nullopt discloses all.
    std::optional<std::vector<std::string>> disclosure_schema;

    bool operator==(const InboxState&) const = default;
};

InboxState inject(InboxEntry entry, InboxState state);           // throws DuplicateEntry
const InboxEntry& lookup(const InboxState& state, const Identifier& id); // throws NotFound

struct Consumption {
    ConsumptionTranscript transcript;
    InboxState state;
};

// Throws NotFound, WrongSecret, AlreadyConsumed. Failures record nothing.
Consumption consume(const Identifier& id, ByteView secret, const Nonce& nonce, InboxState state);

struct Receipt {
    Proof proof;
    ParamBundle public_values;
    VkId vk_id;

    bool operator==(const Receipt&) const = default;
};

CanonicalBytes encode(const Receipt& r);

// ("identifier", ..) ("nullifier", ..) then every disclosed output as "out.<label>".
ParamBundle receipt_public_values(const ConsumptionTranscript& t);

// Throws NoReceiptKey unless `prover` is set and its key is registered as a
// signature_receipt vk for the consumption relation.
Receipt export_receipt(const ConsumptionTranscript& t, const SigningKey* prover, const VerifierRouter& router);

// Relation 3: witness = encode(identifier, secret); checks the nullifier.
RelationDescriptor consumption_receipt_relation();
// Relation 4: public values = ("secret_commitment", c) ++ public params;
// witness = encode(nonce, secret); checks c opens to (secret || public params).
RelationDescriptor inbox_injection_relation();
void register_inbox_relations(RelationRegistry& registry);

ParamBundle injection_public_values(const Commitment& secret_commitment, const ParamBundle& public_params);
// Recovers an inbox entry from relation-4 public values; nullopt if they do not parse.
std::optional<InboxEntry> entry_from_injection(const Identifier& id, const ParamBundle& public_values);

Bytes encode_consumption_witness(const Identifier& id, ByteView secret);
Bytes encode_injection_witness(const Nonce& nonce, ByteView secret);

} // namespace pcimkit
