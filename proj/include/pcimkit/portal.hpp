#pragma once

// Receiver-side acceptance. accept_pcm / accept_pcim are state-transition
// predicates: they return the verdict and the successor portal state. Checks
// run in a fixed order so rejection reasons are deterministic:
//
//   structural (MalformedMessage)
//   PCIM only: origin (OriginInvalid) -> finality (NotFinal)
//   replay (ReplayDetected) -> binding (BindingMismatch) -> proof (ProofInvalid)
//   -> root (RootMismatch)
//
// A rejected attempt leaves the state untouched. Callers must serialize
// accepts on one portal.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "pcimkit/attestation.hpp"
#include "pcimkit/commitment.hpp"
#include "pcimkit/finality.hpp"
#include "pcimkit/hash.hpp"
#include "pcimkit/merkle.hpp"
#include "pcimkit/params.hpp"
#include "pcimkit/relations.hpp"
#include "pcimkit/router.hpp"

namespace pcimkit {

inline constexpr std::string_view kSeqLabel = "seq";

struct Message {
    std::uint32_t origin_domain = 0;
    Bytes sender;
    std::uint32_t dest_domain = 0;
    RelationId relation_id;
    ParamBundle body; // carries "seq" as 8-octet little-endian

    bool operator==(const Message&) const = default;
};

struct Pcm {
    Message m;
    Commitment commitment;
    Identifier identifier;
    ParamBundle public_values;
    Proof proof;
    VkId vk_id;
    StateRoot pre_root;
    StateRoot post_root;

    bool operator==(const Pcm&) const = default;
};

struct Pcim {
    Pcm pcm;
    FinalityTag finality_tag;
    Attestation attestation;

    bool operator==(const Pcim&) const = default;
};

Bytes encode_u64_le(std::uint64_t v);
std::optional<std::uint64_t> message_sequence(const Message& m);

void encode_into(Encoder& enc, const Message& m);
CanonicalBytes encode(const Message& m);
CanonicalBytes encode(const Pcm& pcm);
CanonicalBytes encode(const Pcim& pcim);
Message decode_message(ByteView bytes);
Pcm decode_pcm(ByteView bytes);
Pcim decode_pcim(ByteView bytes);

// The bytes guardians sign for a PCIM: encode((m, commitment, identifier, finality_tag)).
CanonicalBytes attested_body(const Pcm& pcm, const FinalityTag& tag);

enum class Reason : Byte {
    OK,
    ReplayDetected,
    OriginInvalid,
    NotFinal,
    BindingMismatch,
    ProofInvalid,
    RootMismatch,
    MalformedMessage,
};

inline constexpr std::array<Reason, 8> kAllReasons{
    Reason::OK,           Reason::ReplayDetected, Reason::OriginInvalid, Reason::NotFinal,
    Reason::BindingMismatch, Reason::ProofInvalid, Reason::RootMismatch,  Reason::MalformedMessage,
};

std::string_view to_string(Reason r);
std::optional<Reason> parse_reason(std::string_view name);

struct AcceptanceResult {
    bool accepted = false;
    Reason reason = Reason::MalformedMessage;

    static AcceptanceResult ok() { return {true, Reason::OK}; }
    static AcceptanceResult reject(Reason r) { return {false, r}; }
    bool operator==(const AcceptanceResult&) const = default;
};

struct PortalState {
    std::set<Identifier> replay_registry;
    StateRoot current_root;

    bool operator==(const PortalState&) const = default;
};

// Read-only views the portal consults. All referenced objects must outlive the call.
struct PortalContext {
    std::uint32_t domain_id;
    const std::map<std::uint32_t, GuardianSet>& guardian_sets;
    const std::map<std::uint32_t, SimChain>& sender_chains;
    const RelationRegistry& relations;
    const VerifierRouter& router;
};

struct Acceptance {
    AcceptanceResult result;
    PortalState state;
};

Acceptance accept_pcm(const Pcm& pcm, const Opening& opening, PortalState state, const PortalContext& ctx);
Acceptance accept_pcim(const Pcim& pcim, const Opening& opening, PortalState state, const PortalContext& ctx);

using Mutator = std::function<Pcim(Pcim)>;

// Pure transport: applies the (possibly adversarial) mutator, no validation.
Pcim relay(Pcim pcim, const Mutator& mutator);

// hex(identifier) reason hex(pre_root) hex(post_root)
std::string acceptance_log_line(const Identifier& id, Reason reason, const StateRoot& pre_root,
                                const StateRoot& post_root);

} // namespace pcimkit
