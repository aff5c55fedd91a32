#include "pcimkit/merkle.hpp"

#include "pcimkit/error.hpp"
#include "pcimkit/hash.hpp"

namespace pcimkit {

void encode_into(Encoder& enc, const UpdateCommand& cmd) {
    enc.tag(TypeTag::UpdateCommand).u32(cmd.leaf_index).bytes(cmd.old_leaf).bytes(cmd.new_leaf);
    enc.count(cmd.merkle_path.size());
    for (const auto& step : cmd.merkle_path) {
        enc.digest(step.sibling).u8(static_cast<Byte>(step.side));
    }
}

UpdateCommand decode_update_command(Decoder& dec) {
    dec.expect_tag(TypeTag::UpdateCommand);
    UpdateCommand cmd;
    cmd.leaf_index = dec.u32();
    cmd.old_leaf = dec.bytes();
    cmd.new_leaf = dec.bytes();
    auto n = dec.count();
    for (std::size_t i = 0; i < n; ++i) {
        PathStep step;
        step.sibling = dec.digest();
        auto side = dec.u8();
        if (side > 1) throw Error(ErrorCode::DecodeFailure, "bad path side");
        step.side = static_cast<Side>(side);
        cmd.merkle_path.push_back(step);
    }
    return cmd;
}

CanonicalBytes encode_command_list(std::span<const UpdateCommand> cmds) {
    Encoder enc;
    enc.tag(TypeTag::CommandList).count(cmds.size());
    for (const auto& c : cmds) encode_into(enc, c);
    return std::move(enc).finish();
}

std::vector<UpdateCommand> decode_command_list(ByteView bytes) {
    Decoder dec(bytes);
    dec.expect_tag(TypeTag::CommandList);
    auto n = dec.count();
    std::vector<UpdateCommand> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(decode_update_command(dec));
    dec.expect_done();
    return out;
}

Digest merkle_node(const Digest& left, const Digest& right) {
    std::array<Byte, 2 * kDigestSize> buf;
    std::copy(left.bytes.begin(), left.bytes.end(), buf.begin());
    std::copy(right.bytes.begin(), right.bytes.end(), buf.begin() + kDigestSize);
    return hash(DomainTag::Root, buf);
}

std::optional<Digest> fold_path(ByteView leaf, std::uint32_t leaf_index, std::span<const PathStep> path) {
    if (leaf.size() != kDigestSize || path.size() > kMaxTreeDepth) return std::nullopt;
    if ((static_cast<std::uint64_t>(leaf_index) >> path.size()) != 0) return std::nullopt;

    Digest node = Digest::from(leaf);
    for (std::size_t level = 0; level < path.size(); ++level) {
        const bool is_right_child = (leaf_index >> level) & 1u;
        const auto& step = path[level];
        if (is_right_child != (step.side == Side::Left)) return std::nullopt;
        node = is_right_child ? merkle_node(step.sibling, node) : merkle_node(node, step.sibling);
    }
    return node;
}

bool merkle_transition_check(const StateRoot& pre_root, const StateRoot& post_root, const UpdateCommand& cmd) {
    auto pre = fold_path(cmd.old_leaf, cmd.leaf_index, cmd.merkle_path);
    auto post = fold_path(cmd.new_leaf, cmd.leaf_index, cmd.merkle_path);
    return pre && post && *pre == pre_root.digest && *post == post_root.digest;
}

MerkleTree::MerkleTree(std::uint32_t depth) : depth_(depth) {
    if (depth > kMaxTreeDepth) {
        throw Error(ErrorCode::InvalidArgument, "tree depth " + std::to_string(depth));
    }
    levels_.resize(depth + 1);
    levels_[0].assign(leaf_count(), Digest{});
    for (std::uint32_t l = 1; l <= depth; ++l) {
        const auto& below = levels_[l - 1];
        levels_[l].resize(below.size() / 2);
        // all nodes on a level of an empty tree are equal
        const Digest n = merkle_node(below[0], below[0]);
        std::fill(levels_[l].begin(), levels_[l].end(), n);
    }
}

std::vector<PathStep> MerkleTree::path(std::uint32_t index) const {
    if (index >= leaf_count()) {
        throw Error(ErrorCode::InvalidArgument, "leaf index " + std::to_string(index));
    }
    std::vector<PathStep> out;
    std::size_t pos = index;
    for (std::uint32_t l = 0; l < depth_; ++l) {
        const bool is_right = pos & 1u;
        out.push_back({levels_[l][pos ^ 1u], is_right ? Side::Left : Side::Right});
        pos >>= 1;
    }
    return out;
}

void MerkleTree::set_leaf(std::uint32_t index, const Digest& value) {
    if (index >= leaf_count()) {
        throw Error(ErrorCode::InvalidArgument, "leaf index " + std::to_string(index));
    }
    levels_[0][index] = value;
    std::size_t pos = index;
    for (std::uint32_t l = 1; l <= depth_; ++l) {
        pos >>= 1;
        levels_[l][pos] = merkle_node(levels_[l - 1][2 * pos], levels_[l - 1][2 * pos + 1]);
    }
}

UpdateCommand MerkleTree::update(std::uint32_t index, const Digest& new_value) {
    UpdateCommand cmd;
    cmd.leaf_index = index;
    cmd.merkle_path = path(index);
    const auto& old = leaf(index);
    cmd.old_leaf.assign(old.bytes.begin(), old.bytes.end());
    cmd.new_leaf.assign(new_value.bytes.begin(), new_value.bytes.end());
    set_leaf(index, new_value);
    return cmd;
}

StateRoot MerkleTree::empty_root(std::uint32_t depth) {
    Digest node{};
    for (std::uint32_t l = 0; l < depth; ++l) node = merkle_node(node, node);
    return StateRoot{node};
}

} // namespace pcimkit
