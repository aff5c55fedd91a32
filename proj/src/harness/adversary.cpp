#include "pcimkit/harness/adversary.hpp"

#include <algorithm>
#include <sstream>

#include "pcimkit/error.hpp"
#include "pcimkit/harness/world.hpp"

namespace pcimkit::harness {

namespace {

constexpr std::uint64_t kSuiteStream = 0x5355495445; // "SUITE"

struct Trial {
    World& world;
    Rng& rng;
    std::uint32_t origin;
    std::uint32_t dest;
    std::uint32_t tree_depth;
    AdversarySummary& summary;
    bool can_attest;
    std::uint64_t seq = 0;

    bool coin() { return draw_below(rng, 2) == 1; }

    SendEvent random_send(MessageKind kind, RelationId relation) {
        SendEvent s;
        s.msg = "m" + std::to_string(seq);
        s.kind = kind;
        s.origin = origin;
        s.dest = dest;
        s.sender = "sender" + std::to_string(draw_below(rng, 4));
        s.seq = seq++;
        s.relation = relation;
        s.tag = TagPolicy::Finalized;
        if (relation == kMerkleTransition) {
            const auto n = 1 + draw_below(rng, 2);
            for (std::uint64_t i = 0; i < n; ++i) {
                s.updates.push_back({static_cast<std::uint32_t>(draw_below(rng, 1ULL << tree_depth)), draw_digest(rng)});
            }
            s.backend = coin() ? BackendKind::SignatureReceipt : BackendKind::TransparentReexec;
        } else if (relation == kHashPreimage) {
            s.preimage = draw_bytes(rng, 8 + draw_below(rng, 17));
            s.backend = coin() ? BackendKind::SignatureReceipt : BackendKind::TransparentReexec;
        } else {
            s.secret = draw_bytes(rng, 16 + draw_below(rng, 17));
            s.backend = BackendKind::SignatureReceipt;
        }
        if (coin()) s.params.add("amount", draw_bytes(rng, 8));
        return s;
    }

    RelationId random_relation() {
        static constexpr RelationId kSendable[] = {kMerkleTransition, kHashPreimage, kInboxInjection};
        return kSendable[draw_below(rng, 3)];
    }

    MessageKind random_kind() { return can_attest && coin() ? MessageKind::Pcim : MessageKind::Pcm; }

    DeliveryRecord adversarial(const Outgoing& honest, const Delivery& d) {
        DeliveryRecord rec = world.deliver(honest, d);
        ++summary.deliveries;
        if (rec.violation) {
            ++summary.attempts;
            ++(rec.result.accepted ? summary.missed : summary.caught);
        }
        return rec;
    }

    // An honest delivery that is expected to go through.
    void honest(const Outgoing& msg) {
        DeliveryRecord rec = world.deliver(msg);
        ++summary.deliveries;
        if (!rec.result.accepted) ++summary.honest_rejected;
    }
};

void replayer(Trial& t) {
    t.world.advance(t.origin, 3);
    const Outgoing msg = t.world.build(t.random_send(t.random_kind(), t.random_relation()));
    t.honest(msg);
    const auto copies = 1 + draw_below(t.rng, 3);
    for (std::uint64_t i = 0; i < copies; ++i) {
        if (t.coin()) t.world.advance(t.origin, 1);
        t.adversarial(msg, Delivery{msg.pcim, msg.opening});
    }
}

void substituter(Trial& t) {
    static constexpr MutatorKind kMutators[] = {
        MutatorKind::SwapPublicValues, MutatorKind::SwapOpening,    MutatorKind::SwapProof,
        MutatorKind::MutatePreRoot,    MutatorKind::MutatePostRoot, MutatorKind::WrongVk,
    };
    t.world.advance(t.origin, 3);
    const auto kind = t.random_kind();
    const Outgoing msg = t.world.build(t.random_send(kind, t.random_relation()));
    const Outgoing donor = t.world.build(t.random_send(kind, kHashPreimage));
    const auto mutator = kMutators[draw_below(t.rng, std::size(kMutators))];
    t.adversarial(msg, t.world.mutate(msg, mutator, &donor));
    t.honest(msg);
}

void prefinality_forker(Trial& t, const DomainConfig& origin_cfg) {
    t.world.advance(t.origin, origin_cfg.finality_lag + 2);

    // Root-neutral relations only, so the shadow tree stays in step with the portal.
    SendEvent spec = t.random_send(MessageKind::Pcim, t.coin() ? kHashPreimage : kInboxInjection);
    spec.tag = TagPolicy::Tip;
    const Outgoing forked = t.world.build(spec);
    t.adversarial(forked, Delivery{forked.pcim, forked.opening});

    const SimChain& c = t.world.chain(t.origin);
    const auto room = c.tip_height() - c.finalized_height();
    if (room > 0) t.world.reorg(t.origin, static_cast<std::uint32_t>(1 + draw_below(t.rng, room)));
    t.world.advance(t.origin, origin_cfg.finality_lag + 1);
    t.adversarial(forked, Delivery{forked.pcim, forked.opening});

    SendEvent next = t.random_send(MessageKind::Pcim, kHashPreimage);
    t.honest(t.world.build(next));
}

void origin_forger(Trial& t) {
    t.world.advance(t.origin, 3);
    const Outgoing msg = t.world.build(t.random_send(MessageKind::Pcim, t.random_relation()));
    const auto mutator = draw_below(t.rng, 4) == 0 ? MutatorKind::DropSignature : MutatorKind::ForgeOrigin;
    t.adversarial(msg, t.world.mutate(msg, mutator));
    t.honest(msg);
}

void reorderer(Trial& t) {
    t.world.advance(t.origin, 3);
    const auto kind = t.random_kind();
    const auto n = 2 + draw_below(t.rng, 7);
    std::vector<Outgoing> msgs;
    // Transitions only: a root-neutral message pinned to an intermediate root
    // could be overtaken honestly and never land.
    for (std::uint64_t i = 0; i < n; ++i) msgs.push_back(t.world.build(t.random_send(kind, kMerkleTransition)));

    std::vector<bool> accepted(n, false);
    std::vector<std::size_t> schedule;
    for (std::size_t i = 0; i < n; ++i) {
        schedule.push_back(i);
        if (t.coin()) schedule.push_back(i);
    }
    while (!schedule.empty()) {
        std::shuffle(schedule.begin(), schedule.end(), t.rng);
        bool progress = false;
        std::vector<bool> seen(n, false);
        std::size_t high = 0;
        for (auto i : schedule) {
            if (seen[i] || i < high) ++t.summary.perturbed;
            seen[i] = true;
            high = std::max(high, i);
            DeliveryRecord rec = t.adversarial(msgs[i], Delivery{msgs[i].pcim, msgs[i].opening});
            if (rec.result.accepted && !accepted[i]) {
                accepted[i] = true;
                progress = true;
            }
        }
        schedule.clear();
        if (!progress) break;
        for (std::size_t i = 0; i < n; ++i) {
            if (accepted[i]) {
                if (draw_below(t.rng, 4) == 0) schedule.push_back(i); // late replay
            } else {
                schedule.push_back(i);
            }
        }
        if (std::all_of(accepted.begin(), accepted.end(), [](bool b) { return b; })) {
            for (auto i : schedule) {
                t.adversarial(msgs[i], Delivery{msgs[i].pcim, msgs[i].opening});
                ++t.summary.perturbed;
            }
            schedule.clear();
        }
    }
    t.summary.honest_rejected += static_cast<std::uint64_t>(std::count(accepted.begin(), accepted.end(), false));
}

} // namespace

AdversarySummary run_adversary_suite(const Scenario& base, AdversaryKind kind, std::uint32_t trials) {
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
    if (base.domains.empty()) throw Error(ErrorCode::InvalidArgument, "base scenario declares no domain");
    const DomainConfig& origin_cfg = base.domains.front();
    const std::uint32_t origin = origin_cfg.domain_id;
    const std::uint32_t dest = base.domains.back().domain_id;

    const auto& sets = base.guardian_sets;
    const bool can_attest =
        !sets.empty() && (sets.front().generated_members > 0 || sets.front().member_keys.empty());
    if (kind == AdversaryKind::PrefinalityForker || kind == AdversaryKind::OriginForger) {
        if (!can_attest) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string(to_string(kind)) + " needs a guardian set with signing keys");
        }
    }
    if (kind == AdversaryKind::PrefinalityForker && origin_cfg.finality_lag == 0) {
        throw Error(ErrorCode::InvalidArgument, "prefinality_forker needs finality_lag >= 1 on the origin domain");
    }

    AdversarySummary summary;
    summary.kind = kind;
    summary.trials = trials;
    for (std::uint32_t trial = 0; trial < trials; ++trial) {
        Rng seeder = make_rng({base.seed, kSuiteStream, static_cast<std::uint64_t>(kind), trial});
        World world(base, seeder());
        Trial t{world, world.rng(), origin, dest, base.tree_depth, summary, can_attest};
        switch (kind) {
        case AdversaryKind::Replayer: replayer(t); break;
        case AdversaryKind::Substituter: substituter(t); break;
        case AdversaryKind::PrefinalityForker: prefinality_forker(t, origin_cfg); break;
        case AdversaryKind::OriginForger: origin_forger(t); break;
        case AdversaryKind::Reorderer: reorderer(t); break;
        }
        summary.matrix += world.matrix();
    }
    return summary;
}

std::string summary_line(const AdversarySummary& s) {
    std::ostringstream os;
    os << "adversary=" << to_string(s.kind) << " trials=" << s.trials << " attempts=" << s.attempts
       << " caught=" << s.caught << " missed=" << s.missed << " honest_rejected=" << s.honest_rejected;
    return os.str();
}

} // namespace pcimkit::harness
