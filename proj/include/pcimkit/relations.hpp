#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pcimkit/bytes.hpp"
#include "pcimkit/merkle.hpp"
#include "pcimkit/params.hpp"

namespace pcimkit {

struct RelationId {
    std::uint32_t value = 0;
    auto operator<=>(const RelationId&) const = default;
};

inline constexpr RelationId kMerkleTransition{1};
inline constexpr RelationId kHashPreimage{2};
inline constexpr RelationId kConsumptionReceipt{3};
inline constexpr RelationId kInboxInjection{4};

// A (public values, witness) pair for some relation.
struct Statement {
    ParamBundle public_values;
    Bytes witness;

    bool operator==(const Statement&) const = default;
};

using RelationCheck = std::function<bool(const ParamBundle& public_values, ByteView witness)>;
using BatchComposer = std::function<Statement(std::span<const Statement>)>;

struct RelationDescriptor {
    RelationId id;
    std::string name;
    RelationCheck check;
    bool batchable = false;
    BatchComposer batch_compose; // set iff batchable
    bool witness_secret = false;  // never publish the witness (no transparent verification)
};

class RelationRegistry {
public:
    // Registers ids 1 (merkle-transition) and 2 (hash-preimage).
    static RelationRegistry with_builtins();

    // Throws DuplicateRelationId; InvalidArgument if batchable without a composer.
    RelationId register_relation(RelationDescriptor desc);
    // Throws UnknownRelation.
    const RelationDescriptor& get(RelationId id) const;
    bool contains(RelationId id) const { return relations_.count(id) != 0; }
    std::vector<RelationId> ids() const;

private:
    std::map<RelationId, RelationDescriptor> relations_;
};

// Merkle transition statement: commands applied in order take pre_root to post_root.
struct TransitionStatement {
    StateRoot pre_root;
    StateRoot post_root;
    std::vector<UpdateCommand> commands;

    bool operator==(const TransitionStatement&) const = default;
};

bool check_transition(const TransitionStatement& s);

// Sequential chaining. Throws InvalidArgument on an empty list and
// BatchChainBroken when post_root[k] != pre_root[k+1].
TransitionStatement batch_compose(std::span<const TransitionStatement> statements);

// Relation-1 encoding: public values carry "pre_root" and "post_root", the
// witness is the encoded command list.
Statement to_statement(const TransitionStatement& s);
TransitionStatement from_statement(const Statement& s); // throws DecodeFailure

RelationDescriptor merkle_transition_relation();
RelationDescriptor hash_preimage_relation();

} // namespace pcimkit
