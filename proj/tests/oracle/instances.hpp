#pragma once

// Random Merkle workloads shared by the relation tests and the acceptance run.

#include <vector>

#include "merkle_oracle.hpp"
#include "pcimkit/merkle.hpp"
#include "pcimkit/relations.hpp"
#include "pcimkit/rng.hpp"

namespace oracle {

inline FullTree random_tree(pcimkit::Rng& rng, std::uint32_t depth) {
    FullTree t(depth);
    for (auto& l : t.leaves) {
        if (pcimkit::draw_below(rng, 2) == 0) l = pcimkit::draw_digest(rng);
    }
    return t;
}

inline pcimkit::MerkleTree library_tree(const FullTree& t) {
    pcimkit::MerkleTree m(t.depth);
    for (std::uint32_t i = 0; i < t.leaves.size(); ++i) m.set_leaf(i, t.leaves[i]);
    return m;
}

// n statements chained over one evolving tree, 1-3 commands each.
inline std::vector<pcimkit::TransitionStatement> chained(pcimkit::Rng& rng, pcimkit::MerkleTree& tree, std::size_t n) {
    using namespace pcimkit;
    std::vector<TransitionStatement> out;
    for (std::size_t k = 0; k < n; ++k) {
        TransitionStatement s;
        s.pre_root = tree.root();
        const auto cmds = 1 + draw_below(rng, 3);
        for (std::uint64_t c = 0; c < cmds; ++c) {
            s.commands.push_back(tree.update(static_cast<std::uint32_t>(draw_below(rng, tree.leaf_count())),
                                             draw_digest(rng)));
        }
        s.post_root = tree.root();
        out.push_back(std::move(s));
    }
    return out;
}

struct MerkleInstance {
    FullTree full{1};
    pcimkit::StateRoot pre;
    pcimkit::StateRoot post;
    pcimkit::UpdateCommand cmd;
};

// An honest single-leaf update on a random tree of depth 1-4, then one of
// eight corruptions (or none).
inline MerkleInstance random_instance(pcimkit::Rng& rng) {
    using namespace pcimkit;
    const auto depth = static_cast<std::uint32_t>(1 + draw_below(rng, 4));
    MerkleInstance x;
    x.full = random_tree(rng, depth);
    MerkleTree tree = library_tree(x.full);
    const auto pre = tree.root();
    const auto index = static_cast<std::uint32_t>(draw_below(rng, x.full.leaves.size()));
    x.cmd = tree.update(index, draw_digest(rng));
    x.pre = pre;
    x.post = tree.root();

    auto& cmd = x.cmd;
    switch (draw_below(rng, 9)) {
    case 0: break;
    case 1: cmd.old_leaf[draw_below(rng, 32)] ^= 1; break;
    case 2: cmd.new_leaf[draw_below(rng, 32)] ^= 1; break;
    case 3: cmd.merkle_path[draw_below(rng, depth)].sibling.bytes[draw_below(rng, 32)] ^= 1; break;
    case 4: {
        auto& s = cmd.merkle_path[draw_below(rng, depth)].side;
        s = s == Side::Left ? Side::Right : Side::Left;
        break;
    }
    case 5: cmd.leaf_index = static_cast<std::uint32_t>(draw_below(rng, 2 * x.full.leaves.size())); break;
    case 6: x.pre.digest.bytes[draw_below(rng, 32)] ^= 1; break;
    case 7: x.post = pre; break;
    default:
        if (draw_below(rng, 2) == 0) cmd.merkle_path.pop_back();
        else cmd.old_leaf.push_back(0);
    }
    return x;
}

} // namespace oracle
