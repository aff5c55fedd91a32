#pragma once

// Adversary suite. Each trial builds a fresh World from the base scenario's
// domains and guardian sets (its events are not replayed) with a per-trial
// seed, then runs the kind's program:
//
//   replayer            delivers an honest message, then re-delivers it 1-3 times
//   substituter         keeps (m, commitment, identifier), swaps public values,
//                       opening, proof, roots or vk; then delivers the honest copy
//   prefinality_forker  tags at a non-final tip, reorgs the tagged block away,
//                       delivers before and after; then delivers a finalized copy
//   origin_forger       re-attests a substituted body with threshold-1 members
//                       padded by outsider keys, or drops a signature
//   reorderer           chained state transitions delivered in a shuffled
//                       schedule with duplicates until nothing more is accepted
//
// The first declared domain is the origin, the last the destination.

#include <cstdint>
#include <string>

#include "pcimkit/harness/allocation.hpp"
#include "pcimkit/harness/scenario.hpp"

namespace pcimkit::harness {

struct AdversarySummary {
    AdversaryKind kind = AdversaryKind::Replayer;
    std::uint32_t trials = 0;
    std::uint64_t attempts = 0;        // adversarial deliveries
    std::uint64_t caught = 0;
    std::uint64_t missed = 0;
    std::uint64_t honest_rejected = 0; // honest messages that never got in
    std::uint64_t deliveries = 0;      // every delivery, honest or not
    std::uint64_t perturbed = 0;       // reorderer: duplicated or out-of-order deliveries
    AllocationMatrix matrix;

    bool passed() const { return missed == 0 && honest_rejected == 0; }
};

// Throws InvalidArgument when trials == 0 or the base cannot host the kind.
AdversarySummary run_adversary_suite(const Scenario& base, AdversaryKind kind, std::uint32_t trials);

// adversary=K trials=N attempts=A caught=C missed=M honest_rejected=H
std::string summary_line(const AdversarySummary& s);

} // namespace pcimkit::harness
