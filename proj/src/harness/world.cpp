#include "pcimkit/harness/world.hpp"

#include <algorithm>

#include "pcimkit/error.hpp"

namespace pcimkit::harness {

namespace {

constexpr std::uint64_t kWorldStream = 0x574f524c44;   // "WORLD"
constexpr std::uint64_t kGuardianStream = 0x4755415244; // "GUARD"
constexpr std::uint64_t kProverStream = 0x50524f5645;   // "PROVE"

[[noreturn]] void invalid(const std::string& msg) {
    throw Error(ErrorCode::ScenarioInvalid, msg);
}

double draw_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void flip_byte(Bytes& b, Rng& rng) {
    if (b.empty()) {
        b.push_back(static_cast<Byte>(1 + draw_below(rng, 255)));
        return;
    }
    b[draw_below(rng, b.size())] ^= static_cast<Byte>(1 + draw_below(rng, 255));
}

void flip_digest(Digest& d, Rng& rng) {
    d.bytes[draw_below(rng, kDigestSize)] ^= static_cast<Byte>(1 + draw_below(rng, 255));
}

// A bundle guaranteed to differ from `pv`.
ParamBundle perturb(const ParamBundle& pv, Rng& rng) {
    ParamBundle out;
    const auto& entries = pv.entries();
    if (entries.empty() || draw_below(rng, 4) == 0) {
        out = pv;
        std::string label = "injected";
        while (out.contains(label)) label += "_";
        out.add(label, draw_bytes(rng, 8));
        return out;
    }
    const std::size_t victim = draw_below(rng, entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Bytes v = entries[i].value;
        if (i == victim) flip_byte(v, rng);
        out.add(entries[i].label, std::move(v));
    }
    return out;
}

} // namespace

World::World(const Scenario& setup, std::uint64_t seed)
    : seed_(seed), rng_(make_rng({seed, kWorldStream})), tree_depth_(setup.tree_depth),
      relations_(RelationRegistry::with_builtins()) {
    register_inbox_relations(relations_);

    for (const auto& d : setup.domains) {
        domain_configs_[d.domain_id] = d;
        chains_.emplace(d.domain_id, SimChain::genesis(d.domain_id));
        Receiver r{PortalState{{}, MerkleTree::empty_root(tree_depth_)}, InboxState{}, MerkleTree(tree_depth_), {}, {}, {}};
        receivers_.emplace(d.domain_id, std::move(r));
    }

    for (const auto& g : setup.guardian_sets) {
        GuardianCommittee c;
        c.set.set_id = g.set_id;
        if (g.generated_members > 0) {
            Rng grng = make_rng({seed, kGuardianStream, g.set_id});
            c = GuardianCommittee::generate(
                g.set_id, g.generated_members,
                g.threshold.value_or(GuardianSet::default_threshold(g.generated_members)), grng);
        } else {
            for (const auto& s : g.member_seeds) {
                c.keys.push_back(SigningKey::from_seed(s));
                c.set.members.push_back(c.keys.back().verify_key());
            }
            for (const auto& k : g.member_keys) c.set.members.push_back(k);
            c.set.threshold = g.threshold.value_or(GuardianSet::default_threshold(c.set.members.size()));
            try {
                c.set.validate();
            } catch (const Error& e) {
                invalid("guardians " + std::to_string(g.set_id) + ": " + e.what());
            }
        }
        guardian_sets_[g.set_id] = c.set;
        committees_.emplace(g.set_id, std::move(c));
        guardian_order_.push_back(g.set_id);
    }

    for (auto relation : relations_.ids()) {
        Rng prng = make_rng({seed, kProverStream, relation.value});
        auto key = SigningKey::from_seed(draw_digest(prng));
        vks_[{relation, BackendKind::SignatureReceipt}] =
            router_.register_vk(BackendKind::SignatureReceipt, relation, key.verify_key().bytes, relations_);
        prover_keys_.emplace(relation, key);
    }
    for (auto relation : {kMerkleTransition, kHashPreimage}) {
        vks_[{relation, BackendKind::TransparentReexec}] =
            router_.register_vk(BackendKind::TransparentReexec, relation, Bytes{}, relations_);
    }
}

World::Receiver& World::receiver(std::uint32_t domain) {
    auto it = receivers_.find(domain);
    if (it == receivers_.end()) invalid("undeclared domain " + std::to_string(domain));
    return it->second;
}

const SimChain& World::chain(std::uint32_t domain) const {
    auto it = chains_.find(domain);
    if (it == chains_.end()) invalid("undeclared domain " + std::to_string(domain));
    return it->second;
}

const PortalState& World::portal(std::uint32_t domain) const {
    return const_cast<World*>(this)->receiver(domain).portal;
}

const InboxState& World::inbox(std::uint32_t domain) const {
    return const_cast<World*>(this)->receiver(domain).inbox;
}

const std::set<Identifier>& World::accepted(std::uint32_t domain) const {
    return const_cast<World*>(this)->receiver(domain).accepted;
}

const MerkleTree& World::shadow_tree(std::uint32_t domain) const {
    return const_cast<World*>(this)->receiver(domain).shadow;
}

const GuardianCommittee& World::committee(std::uint32_t set_id) const {
    auto it = committees_.find(set_id);
    if (it == committees_.end()) invalid("unknown guardian set " + std::to_string(set_id));
    return it->second;
}

std::uint32_t World::default_guardian_set() const {
    if (guardian_order_.empty()) invalid("no guardian set declared");
    return guardian_order_.front();
}

std::vector<std::uint32_t> World::domain_ids() const {
    std::vector<std::uint32_t> out;
    for (const auto& [id, _] : chains_) out.push_back(id);
    return out;
}

VkId World::vk_for(RelationId relation, BackendKind kind) const {
    auto it = vks_.find({relation, kind});
    if (it == vks_.end()) {
        invalid("no " + std::string(to_string(kind)) + " verifier for relation " + std::to_string(relation.value));
    }
    return it->second;
}

const SigningKey& World::prover_key(RelationId relation) const {
    return prover_keys_.at(relation);
}

void World::advance(std::uint32_t domain, std::uint32_t blocks) {
    const auto& cfg = domain_configs_.at(domain);
    SimChain& c = chains_.at(domain);
    c = pcimkit::advance(std::move(c), blocks, rng_());

    if (cfg.reorg_probability > 0.0 && cfg.reorg_max_depth > 0 && draw_unit(rng_) < cfg.reorg_probability) {
        const std::uint64_t room = std::min<std::uint64_t>(cfg.reorg_max_depth, c.tip_height() - c.finalized_height());
        if (room > 0) {
            c = pcimkit::reorg(std::move(c), static_cast<std::uint32_t>(1 + draw_below(rng_, room)), rng_());
        }
    }
    if (c.tip_height() > cfg.finality_lag) {
        const std::uint64_t target = c.tip_height() - cfg.finality_lag;
        if (target > c.finalized_height()) c = pcimkit::finalize(std::move(c), target);
    }
}

void World::reorg(std::uint32_t domain, std::uint32_t depth) {
    SimChain& c = chains_.at(domain);
    c = pcimkit::reorg(std::move(c), depth, rng_());
}

void World::finalize(std::uint32_t domain, std::optional<std::uint64_t> height) {
    SimChain& c = chains_.at(domain);
    c = pcimkit::finalize(std::move(c), height.value_or(c.tip_height()));
}

Outgoing World::build(const SendEvent& spec) {
    Outgoing out;
    out.spec = spec;
    Receiver& dest = receiver(spec.dest);
    chain(spec.origin); // existence check

    Message m;
    m.origin_domain = spec.origin;
    m.sender = to_bytes(spec.sender);
    m.dest_domain = spec.dest;
    m.relation_id = spec.relation;
    m.body.add(std::string(kSeqLabel), encode_u64_le(spec.seq));
    for (const auto& e : spec.params.entries()) m.body.add(e.label, e.value);

    Pcm& pcm = out.pcim.pcm;
    pcm.identifier = derive_identifier(m.origin_domain, m.sender, spec.seq);

    BackendKind backend = spec.backend.value_or(
        spec.relation == kInboxInjection ? BackendKind::SignatureReceipt : BackendKind::TransparentReexec);

    Statement stmt;
    if (spec.relation == kMerkleTransition) {
        TransitionStatement ts;
        ts.pre_root = dest.shadow.root();
        for (const auto& u : spec.updates) ts.commands.push_back(dest.shadow.update(u.index, u.value));
        ts.post_root = dest.shadow.root();
        stmt = to_statement(ts);
        pcm.pre_root = ts.pre_root;
        pcm.post_root = ts.post_root;
    } else if (spec.relation == kHashPreimage) {
        stmt.public_values.add("h", hash(DomainTag::Commit, spec.preimage));
        stmt.witness = spec.preimage;
        pcm.pre_root = pcm.post_root = dest.shadow.root();
    } else if (spec.relation == kInboxInjection) {
        if (backend == BackendKind::TransparentReexec) invalid("transparent_reexec would publish the inbox secret");
        out.secret_nonce = draw_digest(rng_);
        auto sc = commit_secret(spec.secret, spec.params, out.secret_nonce);
        stmt.public_values = injection_public_values(sc, spec.params);
        stmt.witness = encode_injection_witness(out.secret_nonce, spec.secret);
        pcm.pre_root = pcm.post_root = dest.shadow.root();
    } else {
        invalid("relation " + std::to_string(spec.relation.value) + " cannot be sent directly");
    }

    pcm.vk_id = vk_for(spec.relation, backend);
    pcm.proof = backend == BackendKind::TransparentReexec
                    ? prove_transparent(stmt.witness)
                    : prove_signature_receipt(prover_keys_.at(spec.relation), pcm.vk_id, stmt.public_values);
    pcm.public_values = stmt.public_values;
    out.opening = Opening{draw_digest(rng_), stmt.public_values};
    pcm.commitment = commit(out.opening.params, out.opening.nonce);
    pcm.m = std::move(m);

    if (spec.kind == MessageKind::Pcim) {
        const SimChain& origin = chain(spec.origin);
        std::uint64_t h = 0;
        switch (spec.tag) {
        case TagPolicy::Tip: h = origin.tip_height(); break;
        case TagPolicy::Finalized: h = origin.finalized_height(); break;
        case TagPolicy::Height:
            if (spec.tag_height > origin.tip_height()) invalid("tag height above tip of domain " + std::to_string(spec.origin));
            h = spec.tag_height;
            break;
        }
        out.pcim.finality_tag = origin.tag_at(h);

        const auto& c = committee(spec.guardians.value_or(default_guardian_set()));
        if (c.keys.size() != c.set.members.size()) invalid("guardian set " + std::to_string(c.set.set_id) + " cannot sign");
        std::vector<Signer> signers;
        for (std::uint8_t i = 0; i < c.set.threshold; ++i) signers.push_back({i, &c.keys[i]});
        out.pcim.attestation = attest(c.set, signers, attested_body(pcm, out.pcim.finality_tag));
    }
    return out;
}

Delivery World::mutate(const Outgoing& honest, MutatorKind kind, const Outgoing* donor) {
    Delivery d{honest.pcim, honest.opening};
    Pcm& pcm = d.pcim.pcm;
    const bool origin_mutator = kind == MutatorKind::ForgeOrigin || kind == MutatorKind::DropSignature;
    if (origin_mutator && !honest.is_pcim()) invalid(std::string(to_string(kind)) + " needs a pcim");

    switch (kind) {
    case MutatorKind::Identity: break;
    case MutatorKind::SwapPublicValues: pcm.public_values = perturb(pcm.public_values, rng_); break;
    case MutatorKind::SwapOpening:
        pcm.public_values = perturb(pcm.public_values, rng_);
        d.opening = Opening{draw_digest(rng_), pcm.public_values};
        break;
    case MutatorKind::SwapProof:
        if (donor != nullptr && donor->pcim.pcm.proof != pcm.proof) {
            pcm.proof = donor->pcim.pcm.proof;
        } else {
            // a valid proof, but of different public values
            auto other = perturb(pcm.public_values, rng_);
            const auto& entry = router_.entry(pcm.vk_id);
            pcm.proof = entry.kind == BackendKind::SignatureReceipt
                            ? prove_signature_receipt(prover_keys_.at(entry.relation_id), pcm.vk_id, other)
                            : prove_transparent(draw_bytes(rng_, 16));
        }
        break;
    case MutatorKind::MutatePreRoot: flip_digest(pcm.pre_root.digest, rng_); break;
    case MutatorKind::MutatePostRoot: flip_digest(pcm.post_root.digest, rng_); break;
    case MutatorKind::ForgeOrigin: {
        // Substitute the body and re-attest with a sub-threshold coalition padded by outsiders.
        ParamBundle body;
        for (const auto& e : pcm.m.body.entries()) {
            if (e.label != kSeqLabel) continue;
            body.add(e.label, e.value);
        }
        body.add("forged", draw_bytes(rng_, 8));
        pcm.m.body = std::move(body);

        const auto& c = committee(d.pcim.attestation.set_id);
        const std::size_t n = c.set.members.size();
        const std::size_t insiders = c.set.threshold - 1;
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[draw_below(rng_, i)]);
        std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(insiders));

        const auto body_bytes = attested_body(pcm, d.pcim.finality_tag);
        const Digest digest = hash(DomainTag::Attest, body_bytes);
        std::vector<MemberSignature> sigs;
        for (std::size_t i = 0; i < n; ++i) {
            const bool insider = std::find(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(insiders), i) !=
                                 order.begin() + static_cast<std::ptrdiff_t>(insiders);
            if (insider) {
                sigs.push_back({static_cast<std::uint8_t>(i), c.keys.at(i).sign(digest.view())});
            } else {
                auto outsider = SigningKey::from_seed(draw_digest(rng_));
                sigs.push_back({static_cast<std::uint8_t>(i), outsider.sign(digest.view())});
            }
        }
        d.pcim.attestation = Attestation{c.set.set_id, std::move(sigs), digest};
        break;
    }
    case MutatorKind::DropSignature:
        if (!d.pcim.attestation.signatures.empty()) {
            auto& sigs = d.pcim.attestation.signatures;
            sigs.erase(sigs.begin() + static_cast<std::ptrdiff_t>(draw_below(rng_, sigs.size())));
        }
        break;
    case MutatorKind::CorruptIdentifier: flip_digest(pcm.identifier.digest, rng_); break;
    case MutatorKind::WrongVk: {
        const auto& entry = router_.entry(pcm.vk_id);
        auto other = entry.kind == BackendKind::SignatureReceipt ? BackendKind::TransparentReexec
                                                                 : BackendKind::SignatureReceipt;
        auto it = vks_.find({entry.relation_id, other});
        if (it != vks_.end()) {
            pcm.vk_id = it->second;
        } else {
            flip_digest(pcm.vk_id.digest, rng_);
        }
        break;
    }
    }
    return d;
}

bool World::oracle_final(const FinalityTag& tag) const {
    auto it = chains_.find(tag.domain_id);
    if (it == chains_.end()) return false;
    const SimChain& c = it->second;
    if (tag.height > c.finalized_height()) return false;
    for (const auto& b : c.blocks()) {
        if (b.height == tag.height) return b.block_hash == tag.block_hash;
    }
    return false;
}

DeliveryRecord World::deliver(const Outgoing& honest, const Delivery& delivered) {
    Receiver& r = receiver(honest.spec.dest);
    const Pcm& got = delivered.pcim.pcm;
    const Pcm& sent = honest.pcim.pcm;
    const bool pcim = honest.is_pcim();

    // Ground truth, computed from what the harness knows was sent.
    const bool covered_changed = got.m != sent.m || got.commitment != sent.commitment ||
                                 got.identifier != sent.identifier ||
                                 delivered.pcim.finality_tag != honest.pcim.finality_tag;
    const bool origin_violation = pcim && (covered_changed || delivered.pcim.attestation != honest.pcim.attestation);
    const bool replay_violation = r.accepted.count(got.identifier) != 0;
    const bool finality_violation = pcim && !oracle_final(delivered.pcim.finality_tag);
    const bool binding_violation = got.commitment != sent.commitment || got.identifier != sent.identifier ||
                                   got.public_values != sent.public_values || got.proof != sent.proof ||
                                   got.vk_id != sent.vk_id || got.pre_root != sent.pre_root ||
                                   got.post_root != sent.post_root || delivered.opening != honest.opening ||
                                   (!pcim && got.m != sent.m);

    PortalContext ctx{honest.spec.dest, guardian_sets_, chains_, relations_, router_};
    DeliveryRecord rec;
    rec.identifier = got.identifier;
    rec.pre_root = r.portal.current_root;
    Acceptance outcome = pcim ? accept_pcim(delivered.pcim, delivered.opening, r.portal, ctx)
                              : accept_pcm(got, delivered.opening, r.portal, ctx);
    rec.result = outcome.result;
    r.portal = std::move(outcome.state);
    rec.post_root = r.portal.current_root;

    // Checks run in portal order; charge every row reached.
    std::vector<std::pair<Reason, Invariant>> order{{Reason::MalformedMessage, Invariant::ParameterBinding}};
    if (pcim) {
        order.push_back({Reason::OriginInvalid, Invariant::OriginAuthenticity});
        order.push_back({Reason::NotFinal, Invariant::FinalityAlignment});
    }
    order.push_back({Reason::ReplayDetected, Invariant::ReplaySafety});
    order.push_back({Reason::BindingMismatch, Invariant::ParameterBinding});
    order.push_back({Reason::ProofInvalid, Invariant::ParameterBinding});
    order.push_back({Reason::RootMismatch, Invariant::ParameterBinding});
    std::set<Invariant> reached;
    for (const auto& [reason, inv] : order) {
        reached.insert(inv);
        if (reason == rec.result.reason) break;
    }
    for (auto inv : reached) matrix_.exercise(inv);

    std::set<Invariant> violated;
    if (origin_violation) violated.insert(Invariant::OriginAuthenticity);
    if (replay_violation) violated.insert(Invariant::ReplaySafety);
    if (finality_violation) violated.insert(Invariant::FinalityAlignment);
    if (binding_violation) violated.insert(Invariant::ParameterBinding);
    rec.violation = !violated.empty();

    if (rec.result.accepted) {
        for (auto inv : violated) matrix_.miss_violation(inv);
        r.accepted.insert(got.identifier);
        if (got.m.relation_id == kInboxInjection) {
            if (auto entry = entry_from_injection(got.identifier, got.public_values)) {
                if (!r.inbox.entries.count(entry->identifier)) r.inbox = inject(std::move(*entry), std::move(r.inbox));
            }
        }
    } else if (rec.violation) {
        matrix_.catch_violation(invariant_for(rec.result.reason));
    }

    rec.log_line = acceptance_log_line(rec.identifier, rec.result.reason, rec.pre_root, rec.post_root);
    return rec;
}

ConsumeRecord World::consume(const Outgoing& msg, bool honest_secret) {
    Receiver& r = receiver(msg.spec.dest);
    const Identifier id = msg.pcim.pcm.identifier;
    Bytes secret = msg.spec.secret;
    if (!honest_secret) flip_byte(secret, rng_);

    const bool violation = !honest_secret || r.consumed.count(id) != 0;
    matrix_.exercise(Invariant::PrivateConsumption);

    ConsumeRecord rec;
    try {
        Consumption c = pcimkit::consume(id, secret, msg.secret_nonce, r.inbox);
        r.inbox = std::move(c.state);
        rec.outcome = "OK";
        rec.transcript = c.transcript;
        r.transcripts[id] = c.transcript;
        r.consumed.insert(id);
        if (violation) matrix_.miss_violation(Invariant::PrivateConsumption);
    } catch (const Error& e) {
        rec.outcome = std::string(pcimkit::to_string(e.code()));
        if (violation) matrix_.catch_violation(Invariant::PrivateConsumption);
    }
    return rec;
}

ExportRecord World::export_receipt(const Outgoing& msg) {
    Receiver& r = receiver(msg.spec.dest);
    ExportRecord rec;
    auto it = r.transcripts.find(msg.pcim.pcm.identifier);
    if (it == r.transcripts.end()) {
        rec.outcome = "NotFound";
        return rec;
    }
    try {
        Receipt receipt = pcimkit::export_receipt(it->second, &prover_keys_.at(kConsumptionReceipt), router_);
        const bool ok = router_.verify(receipt.proof, receipt.public_values, receipt.vk_id, relations_);
        rec.outcome = ok ? "OK" : "ProofInvalid";
        rec.receipt = std::move(receipt);
    } catch (const Error& e) {
        rec.outcome = std::string(pcimkit::to_string(e.code()));
    }
    return rec;
}

} // namespace pcimkit::harness
