#pragma once

// Scenario files (line-oriented, versioned):
//
//   pcimkit-scenario v1
//   seed = 7
//   quadrant = offchain_privacy          # onchain_scalability | onchain_privacy | offchain_scalability | offchain_privacy
//   tree_depth = 8
//   adversary = replayer:100             # optional, repeatable; run by `suite`
//
//   [domain 1]
//   finality_lag = 2                     # auto-finalize tip - lag after each advance
//   reorg_probability = 0.0              # chance of a random reorg after each advance
//   reorg_max_depth = 0
//
//   [guardians 1]
//   members = 3                          # generated from the seed, or
//   member_seeds = <hex32>,<hex32>,...   # keys from explicit seeds, or
//   member_keys = <hex32>,...            # verify keys only (cannot sign)
//   threshold = 2                        # default floor(2n/3)+1
//
//   [events]
//   event: advance domain=1 blocks=4
//   event: send msg=a kind=pcim origin=1 dest=2 sender=alice seq=0 relation=preimage preimage=6869 tag=finalized
//   event: deliver msg=a expect=OK
//
// Event reference (key=value arguments):
//   advance  domain blocks
//   reorg    domain depth
//   finalize domain [height=N|tip]
//   send     msg kind=pcm|pcim origin dest sender seq relation=merkle|preimage|inbox|<id>
//            [backend=signature_receipt|transparent_reexec] [guardians=<set>]
//            [tag=tip|finalized|<height>] [updates=<leaf>:<hex>,...] [preimage=<hex>]
//            [secret=<hex>] [params=<label>:<hex>,...]
//   deliver  msg [mutator=<name>] [with=<msg>] [expect=<Reason>]
//   consume  msg [secret=honest|wrong] [expect=OK|WrongSecret|AlreadyConsumed|NotFound]
//   export   msg [expect=OK|NoReceiptKey|NotFound]
//
// Blank lines and text after '#' are ignored.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pcimkit/attestation.hpp"
#include "pcimkit/params.hpp"
#include "pcimkit/relations.hpp"
#include "pcimkit/router.hpp"

namespace pcimkit::harness {

inline constexpr std::string_view kScenarioHeader = "pcimkit-scenario v1";

enum class Quadrant { OnchainScalability, OnchainPrivacy, OffchainScalability, OffchainPrivacy };
std::string_view to_string(Quadrant q);

enum class AdversaryKind { Replayer, Substituter, PrefinalityForker, OriginForger, Reorderer };
inline constexpr std::array<AdversaryKind, 5> kAllAdversaries{
    AdversaryKind::Replayer, AdversaryKind::Substituter, AdversaryKind::PrefinalityForker,
    AdversaryKind::OriginForger, AdversaryKind::Reorderer};
std::string_view to_string(AdversaryKind k);
std::optional<AdversaryKind> parse_adversary_kind(std::string_view name);

struct DomainConfig {
    std::uint32_t domain_id = 0;
    std::uint32_t finality_lag = 2;
    double reorg_probability = 0.0;
    std::uint32_t reorg_max_depth = 0;
};

struct GuardianConfig {
    std::uint32_t set_id = 0;
    std::size_t generated_members = 0;
    std::vector<Digest> member_seeds;
    std::vector<VerifyKey> member_keys;
    std::optional<std::uint8_t> threshold;
};

struct AdvanceEvent {
    std::uint32_t domain;
    std::uint32_t blocks;
};
struct ReorgEvent {
    std::uint32_t domain;
    std::uint32_t depth;
};
struct FinalizeEvent {
    std::uint32_t domain;
    std::optional<std::uint64_t> height; // nullopt = tip
};

enum class MessageKind { Pcm, Pcim };
enum class TagPolicy { Tip, Finalized, Height };

struct LeafUpdate {
    std::uint32_t index;
    Digest value;
};

struct SendEvent {
    std::string msg;
    MessageKind kind = MessageKind::Pcim;
    std::uint32_t origin = 0;
    std::uint32_t dest = 0;
    std::string sender;
    std::uint64_t seq = 0;
    RelationId relation = kHashPreimage;
    std::optional<BackendKind> backend; // default per relation
    std::optional<std::uint32_t> guardians; // default: first declared set
    TagPolicy tag = TagPolicy::Finalized;
    std::uint64_t tag_height = 0;
    std::vector<LeafUpdate> updates;
    Bytes preimage;
    Bytes secret;
    ParamBundle params;
};

enum class MutatorKind {
    Identity,
    SwapPublicValues,
    SwapOpening,
    SwapProof,
    MutatePreRoot,
    MutatePostRoot,
    ForgeOrigin,
    DropSignature,
    CorruptIdentifier,
    WrongVk,
};
std::string_view to_string(MutatorKind m);
std::optional<MutatorKind> parse_mutator(std::string_view name);

struct DeliverEvent {
    std::string msg;
    MutatorKind mutator = MutatorKind::Identity;
    std::string with; // donor message for swap_proof
};

struct ConsumeEvent {
    std::string msg;
    bool honest_secret = true;
};

struct ExportEvent {
    std::string msg;
};

using Event = std::variant<AdvanceEvent, ReorgEvent, FinalizeEvent, SendEvent, DeliverEvent, ConsumeEvent, ExportEvent>;

struct ScenarioEvent {
    Event event;
    std::size_t line = 0;
};

struct ExpectedOutcome {
    std::size_t event_index;
    std::string outcome; // Reason name, or a consumption / export outcome

    bool operator==(const ExpectedOutcome&) const = default;
};

struct AdversaryRequest {
    AdversaryKind kind;
    std::uint32_t trials;
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    Quadrant quadrant = Quadrant::OffchainScalability;
    std::uint32_t tree_depth = 8;
    std::vector<DomainConfig> domains;
    std::vector<GuardianConfig> guardian_sets;
    std::vector<ScenarioEvent> events;
    std::vector<ExpectedOutcome> expected_outcomes;
    std::vector<AdversaryRequest> adversaries;
};

// Throws Error(ScenarioInvalid) with "<name>:<line>: <diagnostic>".
Scenario parse_scenario(std::string_view text, std::string name = "<scenario>");
Scenario load_scenario(const std::string& path);

// Semantic checks (declared domains and sets, message references). Called by parse_scenario.
void validate_scenario(const Scenario& s);

} // namespace pcimkit::harness
