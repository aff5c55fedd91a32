#pragma once

// Brute-force Merkle model: materializes every leaf and recomputes the root
// from scratch. Shares nothing with the library tree beyond the hash primitive.

#include <vector>

#include "pcimkit/hash.hpp"
#include "pcimkit/merkle.hpp"

namespace oracle {

struct FullTree {
    std::uint32_t depth;
    std::vector<pcimkit::Digest> leaves;

    explicit FullTree(std::uint32_t d) : depth(d), leaves(std::size_t{1} << d) {}

    static pcimkit::Digest node(const pcimkit::Digest& l, const pcimkit::Digest& r) {
        pcimkit::Bytes buf(l.bytes.begin(), l.bytes.end());
        buf.insert(buf.end(), r.bytes.begin(), r.bytes.end());
        return pcimkit::hash(pcimkit::DomainTag::Root, buf);
    }

    pcimkit::Digest root() const {
        std::vector<pcimkit::Digest> level = leaves;
        while (level.size() > 1) {
            std::vector<pcimkit::Digest> up;
            for (std::size_t i = 0; i < level.size(); i += 2) up.push_back(node(level[i], level[i + 1]));
            level = std::move(up);
        }
        return level[0];
    }

    // Siblings from the leaf level up, found by rebuilding every level.
    std::vector<pcimkit::Digest> siblings(std::uint32_t index) const {
        std::vector<pcimkit::Digest> out;
        std::vector<pcimkit::Digest> level = leaves;
        std::size_t i = index;
        while (level.size() > 1) {
            out.push_back(level[i ^ 1]);
            std::vector<pcimkit::Digest> up;
            for (std::size_t k = 0; k < level.size(); k += 2) up.push_back(node(level[k], level[k + 1]));
            level = std::move(up);
            i /= 2;
        }
        return out;
    }

    // Does `cmd` move this exact tree from `pre` to `post`? Authoritative
    // answer from materialized state, with the library's path conventions:
    // sides follow the index bits, leaves are 32 octets.
    bool accepts(const pcimkit::StateRoot& pre, const pcimkit::StateRoot& post,
                 const pcimkit::UpdateCommand& cmd) const {
        if (pre.digest != root()) return false;
        if (cmd.leaf_index >= leaves.size()) return false;
        if (cmd.old_leaf.size() != 32 || cmd.new_leaf.size() != 32) return false;
        if (cmd.merkle_path.size() != depth) return false;
        if (pcimkit::Digest::from(cmd.old_leaf) != leaves[cmd.leaf_index]) return false;
        const auto sib = siblings(cmd.leaf_index);
        for (std::uint32_t level = 0; level < depth; ++level) {
            const bool we_are_right = (cmd.leaf_index >> level) & 1U;
            const auto want = we_are_right ? pcimkit::Side::Left : pcimkit::Side::Right;
            if (cmd.merkle_path[level].side != want || cmd.merkle_path[level].sibling != sib[level]) return false;
        }
        FullTree after = *this;
        after.leaves[cmd.leaf_index] = pcimkit::Digest::from(cmd.new_leaf);
        return post.digest == after.root();
    }
};

} // namespace oracle
