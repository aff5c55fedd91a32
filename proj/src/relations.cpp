#include "pcimkit/relations.hpp"

#include "pcimkit/error.hpp"
#include "pcimkit/hash.hpp"

namespace pcimkit {

RelationRegistry RelationRegistry::with_builtins() {
    RelationRegistry r;
    r.register_relation(merkle_transition_relation());
    r.register_relation(hash_preimage_relation());
    return r;
}

RelationId RelationRegistry::register_relation(RelationDescriptor desc) {
    if (relations_.count(desc.id)) {
        throw Error(ErrorCode::DuplicateRelationId, std::to_string(desc.id.value));
    }
    if (!desc.check || (desc.batchable && !desc.batch_compose)) {
        throw Error(ErrorCode::InvalidArgument, "incomplete relation descriptor " + desc.name);
    }
    auto id = desc.id;
    relations_.emplace(id, std::move(desc));
    return id;
}

const RelationDescriptor& RelationRegistry::get(RelationId id) const {
    auto it = relations_.find(id);
    if (it == relations_.end()) {
        throw Error(ErrorCode::UnknownRelation, std::to_string(id.value));
    }
    return it->second;
}

std::vector<RelationId> RelationRegistry::ids() const {
    std::vector<RelationId> out;
    for (const auto& [id, _] : relations_) out.push_back(id);
    return out;
}

bool check_transition(const TransitionStatement& s) {
    if (s.commands.empty()) return s.pre_root == s.post_root;
    Digest current = s.pre_root.digest;
    for (const auto& cmd : s.commands) {
        auto before = fold_path(cmd.old_leaf, cmd.leaf_index, cmd.merkle_path);
        auto after = fold_path(cmd.new_leaf, cmd.leaf_index, cmd.merkle_path);
        if (!before || !after || *before != current) return false;
        current = *after;
    }
    return current == s.post_root.digest;
}

TransitionStatement batch_compose(std::span<const TransitionStatement> statements) {
    if (statements.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty batch");
    }
    TransitionStatement out;
    out.pre_root = statements.front().pre_root;
    out.post_root = statements.back().post_root;
    for (std::size_t k = 0; k < statements.size(); ++k) {
        if (k + 1 < statements.size() && statements[k].post_root != statements[k + 1].pre_root) {
            throw Error(ErrorCode::BatchChainBroken, "between statements " + std::to_string(k) + " and " +
                                                         std::to_string(k + 1));
        }
        out.commands.insert(out.commands.end(), statements[k].commands.begin(), statements[k].commands.end());
    }
    return out;
}

Statement to_statement(const TransitionStatement& s) {
    Statement out;
    out.public_values.add("pre_root", s.pre_root.digest).add("post_root", s.post_root.digest);
    out.witness = encode_command_list(s.commands).bytes();
    return out;
}

TransitionStatement from_statement(const Statement& s) {
    const Bytes* pre = s.public_values.find("pre_root");
    const Bytes* post = s.public_values.find("post_root");
    if (s.public_values.size() != 2 || !pre || !post || pre->size() != kDigestSize || post->size() != kDigestSize) {
        throw Error(ErrorCode::DecodeFailure, "transition statement lacks roots");
    }
    return TransitionStatement{StateRoot{Digest::from(*pre)}, StateRoot{Digest::from(*post)},
                               decode_command_list(s.witness)};
}

RelationDescriptor merkle_transition_relation() {
    RelationDescriptor d;
    d.id = kMerkleTransition;
    d.name = "merkle-transition";
    d.check = [](const ParamBundle& pv, ByteView witness) {
        try {
            return check_transition(from_statement(Statement{pv, Bytes(witness.begin(), witness.end())}));
        } catch (const Error&) {
            return false;
        }
    };
    d.batchable = true;
    d.batch_compose = [](std::span<const Statement> stmts) {
        std::vector<TransitionStatement> ts;
        ts.reserve(stmts.size());
        for (const auto& s : stmts) ts.push_back(from_statement(s));
        return to_statement(batch_compose(ts));
    };
    return d;
}

RelationDescriptor hash_preimage_relation() {
    RelationDescriptor d;
    d.id = kHashPreimage;
    d.name = "hash-preimage";
    d.check = [](const ParamBundle& pv, ByteView witness) {
        const Bytes* h = pv.find("h");
        if (pv.size() != 1 || !h || h->size() != kDigestSize) return false;
        return Digest::from(*h) == hash(DomainTag::Commit, witness);
    };
    return d;
}

} // namespace pcimkit
