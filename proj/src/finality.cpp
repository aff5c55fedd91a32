#include "pcimkit/finality.hpp"

#include "pcimkit/error.hpp"
#include "pcimkit/hash.hpp"
#include "pcimkit/rng.hpp"

namespace pcimkit {

namespace {

constexpr std::uint64_t kAdvanceStream = 0x41;
constexpr std::uint64_t kReorgStream = 0x52;

} // namespace

void encode_into(Encoder& enc, const FinalityTag& tag) {
    enc.tag(TypeTag::FinalityTag).u32(tag.domain_id).u64(tag.height).digest(tag.block_hash);
}

Digest block_hash(std::uint32_t domain_id, std::uint64_t height, const Digest& parent, std::uint64_t draw) {
    Encoder enc;
    enc.tag(TypeTag::BlockHeader).u32(domain_id).u64(height).digest(parent).u64(draw);
    return hash(DomainTag::Root, std::move(enc).finish());
}

SimChain SimChain::genesis(std::uint32_t domain_id) {
    SimChain c;
    c.domain_id_ = domain_id;
    c.blocks_.push_back(Block{0, block_hash(domain_id, 0, Digest{}, 0), Digest{}});
    return c;
}

const Block& SimChain::block_at(std::uint64_t height) const {
    if (height > tip_height()) {
        throw Error(ErrorCode::InvalidArgument, "height " + std::to_string(height) + " above tip");
    }
    return blocks_[height];
}

FinalityTag SimChain::tag_at(std::uint64_t height) const {
    return FinalityTag{domain_id_, height, block_at(height).block_hash};
}

void SimChain::append_blocks(std::uint32_t n, std::uint64_t seed, std::uint64_t stream) {
    Rng rng = make_rng({seed, stream, tip_height(), reorg_count_, domain_id_});
    for (std::uint32_t i = 0; i < n; ++i) {
        const Block& parent = blocks_.back();
        Block b{parent.height + 1, {}, parent.block_hash};
        do {
            b.block_hash = block_hash(domain_id_, b.height, b.parent_hash, rng());
        } while (fork_store_.count(b.block_hash) != 0);
        blocks_.push_back(b);
    }
}

SimChain advance(SimChain chain, std::uint32_t n_blocks, std::uint64_t rng_seed) {
    if (n_blocks == 0) {
        throw Error(ErrorCode::InvalidArgument, "advance needs n_blocks >= 1");
    }
    chain.append_blocks(n_blocks, rng_seed, kAdvanceStream);
    return chain;
}

SimChain reorg(SimChain chain, std::uint32_t depth, std::uint64_t rng_seed) {
    if (depth > chain.tip_height() - chain.finalized_height()) {
        throw Error(ErrorCode::ReorgIntoFinalized,
                    "depth " + std::to_string(depth) + " crosses finalized height " +
                        std::to_string(chain.finalized_height()));
    }
    for (std::uint32_t i = 0; i < depth; ++i) {
        const Block& b = chain.blocks_.back();
        chain.fork_store_.emplace(b.block_hash, b.height);
        chain.blocks_.pop_back();
    }
    ++chain.reorg_count_;
    chain.append_blocks(depth + 1, rng_seed, kReorgStream);
    return chain;
}

SimChain finalize(SimChain chain, std::uint64_t new_finalized_height) {
    if (new_finalized_height < chain.finalized_height_) {
        throw Error(ErrorCode::FinalityRegression, std::to_string(new_finalized_height));
    }
    if (new_finalized_height > chain.tip_height()) {
        throw Error(ErrorCode::FinalityBeyondTip, std::to_string(new_finalized_height));
    }
    chain.finalized_height_ = new_finalized_height;
    return chain;
}

bool is_final(const SimChain& chain, const FinalityTag& tag) {
    if (tag.domain_id != chain.domain_id()) {
        throw Error(ErrorCode::DomainMismatch,
                    std::to_string(tag.domain_id) + " vs " + std::to_string(chain.domain_id()));
    }
    if (tag.height > chain.finalized_height()) return false;
    return chain.blocks()[tag.height].block_hash == tag.block_hash;
}

} // namespace pcimkit
