#pragma once

// Fixed-depth binary Merkle tree over 32-octet leaves. Internal nodes are
// hash("root", left || right); the empty leaf is 32 zero octets.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcimkit/bytes.hpp"
#include "pcimkit/encoding.hpp"

namespace pcimkit {

inline constexpr std::uint32_t kDefaultTreeDepth = 8;
inline constexpr std::uint32_t kMaxTreeDepth = 24;

struct StateRoot {
    Digest digest;
    auto operator<=>(const StateRoot&) const = default;
};

// Which side of the running node the sibling sits on.
enum class Side : Byte { Left = 0, Right = 1 };

struct PathStep {
    Digest sibling;
    Side side = Side::Right;

    bool operator==(const PathStep&) const = default;
};

struct UpdateCommand {
    std::uint32_t leaf_index = 0;
    Bytes old_leaf;
    Bytes new_leaf;
    std::vector<PathStep> merkle_path; // leaf level first

    bool operator==(const UpdateCommand&) const = default;
};

void encode_into(Encoder& enc, const UpdateCommand& cmd);
UpdateCommand decode_update_command(Decoder& dec);
CanonicalBytes encode_command_list(std::span<const UpdateCommand> cmds);
std::vector<UpdateCommand> decode_command_list(ByteView bytes);

Digest merkle_node(const Digest& left, const Digest& right);

// Root obtained by folding `leaf` up `path`; nullopt when the leaf is not 32
// octets, the index does not fit the path, or a side disagrees with the index bit.
std::optional<Digest> fold_path(ByteView leaf, std::uint32_t leaf_index, std::span<const PathStep> path);

bool merkle_transition_check(const StateRoot& pre_root, const StateRoot& post_root, const UpdateCommand& cmd);

class MerkleTree {
public:
    explicit MerkleTree(std::uint32_t depth = kDefaultTreeDepth);

    std::uint32_t depth() const { return depth_; }
    std::size_t leaf_count() const { return std::size_t{1} << depth_; }
    StateRoot root() const { return StateRoot{levels_.back()[0]}; }
    const Digest& leaf(std::uint32_t index) const { return levels_[0].at(index); }
    std::vector<PathStep> path(std::uint32_t index) const;

    void set_leaf(std::uint32_t index, const Digest& value);
    // Builds the command for replacing leaf `index` and applies it.
    UpdateCommand update(std::uint32_t index, const Digest& new_value);

    static StateRoot empty_root(std::uint32_t depth);

private:
    std::uint32_t depth_;
    std::vector<std::vector<Digest>> levels_; // levels_[0] = leaves
};

} // namespace pcimkit
