#pragma once

// Simulation state for one run: sender chains, guardian committees, relation
// and verifier registries, and one receiver (portal + inbox) per domain.
// Everything is derived from the seed; a World is driven from a single thread.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pcimkit/harness/allocation.hpp"
#include "pcimkit/harness/scenario.hpp"
#include "pcimkit/inbox.hpp"
#include "pcimkit/portal.hpp"
#include "pcimkit/rng.hpp"

namespace pcimkit::harness {

// An honestly built message as it left the sender.
struct Outgoing {
    SendEvent spec;
    Pcim pcim; // attestation and finality tag are empty for a plain PCM
    Opening opening;
    Nonce secret_nonce; // inbox messages only
    bool is_pcim() const { return spec.kind == MessageKind::Pcim; }
};

// What actually reaches the portal after relaying.
struct Delivery {
    Pcim pcim;
    Opening opening;
};

struct DeliveryRecord {
    Identifier identifier;
    AcceptanceResult result;
    StateRoot pre_root;  // portal root before the attempt
    StateRoot post_root; // and after
    bool violation = false; // harness ground truth: this delivery breaks some invariant
    std::string log_line;
};

struct ConsumeRecord {
    std::string outcome; // OK | WrongSecret | AlreadyConsumed | NotFound
    std::optional<ConsumptionTranscript> transcript;
};

struct ExportRecord {
    std::string outcome; // OK | NoReceiptKey | NotFound | ProofInvalid
    std::optional<Receipt> receipt;
};

class World {
public:
    World(const Scenario& setup, std::uint64_t seed);

    void advance(std::uint32_t domain, std::uint32_t blocks);
    void reorg(std::uint32_t domain, std::uint32_t depth);
    void finalize(std::uint32_t domain, std::optional<std::uint64_t> height);
    const SimChain& chain(std::uint32_t domain) const;

    // Honest sender. Throws ScenarioInvalid when the request cannot be built.
    Outgoing build(const SendEvent& spec);

    // Adversarial relay of `honest`. `donor` supplies the proof for SwapProof.
    Delivery mutate(const Outgoing& honest, MutatorKind kind, const Outgoing* donor = nullptr);

    DeliveryRecord deliver(const Outgoing& honest, const Delivery& delivered);
    DeliveryRecord deliver(const Outgoing& honest) { return deliver(honest, Delivery{honest.pcim, honest.opening}); }

    ConsumeRecord consume(const Outgoing& msg, bool honest_secret);
    ExportRecord export_receipt(const Outgoing& msg);

    const PortalState& portal(std::uint32_t domain) const;
    const InboxState& inbox(std::uint32_t domain) const;
    const std::set<Identifier>& accepted(std::uint32_t domain) const;
    const MerkleTree& shadow_tree(std::uint32_t domain) const;
    const AllocationMatrix& matrix() const { return matrix_; }
    const GuardianCommittee& committee(std::uint32_t set_id) const;
    std::uint32_t default_guardian_set() const;
    std::vector<std::uint32_t> domain_ids() const;
    const RelationRegistry& relations() const { return relations_; }
    const VerifierRouter& router() const { return router_; }
    VkId vk_for(RelationId relation, BackendKind kind) const;
    const SigningKey& prover_key(RelationId relation) const;
    Rng& rng() { return rng_; }

    // Private consumption violations spotted outside the inbox (e.g. a secret
    // found in emitted output) are charged here.
    void record_leak() { matrix_.miss_violation(Invariant::PrivateConsumption); }

private:
    struct Receiver {
        PortalState portal;
        InboxState inbox;
        MerkleTree shadow; // sender-side view of this portal's state tree
        std::set<Identifier> accepted;
        std::set<Identifier> consumed;
        std::map<Identifier, ConsumptionTranscript> transcripts;
    };

    Receiver& receiver(std::uint32_t domain);
    bool oracle_final(const FinalityTag& tag) const;

    std::uint64_t seed_;
    Rng rng_;
    std::uint32_t tree_depth_;
    std::map<std::uint32_t, DomainConfig> domain_configs_;
    std::map<std::uint32_t, SimChain> chains_;
    std::map<std::uint32_t, GuardianCommittee> committees_;
    std::map<std::uint32_t, GuardianSet> guardian_sets_;
    std::vector<std::uint32_t> guardian_order_;
    RelationRegistry relations_;
    VerifierRouter router_;
    std::map<RelationId, SigningKey> prover_keys_;
    std::map<std::pair<RelationId, BackendKind>, VkId> vks_;
    std::map<std::uint32_t, Receiver> receivers_;
    AllocationMatrix matrix_;
};

} // namespace pcimkit::harness
