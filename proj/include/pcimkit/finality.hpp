#pragma once

// Simulated sender chains. Finality is an explicit watermark: blocks at or
// below finalized_height can never be replaced, which makes the finality
// predicate decidable.

#include <cstdint>
#include <map>
#include <vector>

#include "pcimkit/bytes.hpp"
#include "pcimkit/encoding.hpp"

namespace pcimkit {

struct Block {
    std::uint64_t height = 0;
    Digest block_hash;
    Digest parent_hash;

    bool operator==(const Block&) const = default;
};

struct FinalityTag {
    std::uint32_t domain_id = 0;
    std::uint64_t height = 0;
    Digest block_hash;

    bool operator==(const FinalityTag&) const = default;
};

void encode_into(Encoder& enc, const FinalityTag& tag);

class SimChain {
public:
    // Height-0 genesis block, finalized.
    static SimChain genesis(std::uint32_t domain_id);

    std::uint32_t domain_id() const { return domain_id_; }
    std::uint64_t tip_height() const { return blocks_.back().height; }
    std::uint64_t finalized_height() const { return finalized_height_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const Block& block_at(std::uint64_t height) const; // throws InvalidArgument above tip
    const Block& tip() const { return blocks_.back(); }
    const std::map<Digest, std::uint64_t>& fork_store() const { return fork_store_; }
    std::uint64_t reorg_count() const { return reorg_count_; }

    FinalityTag tag_at(std::uint64_t height) const;

    bool operator==(const SimChain&) const = default;

private:
    friend SimChain advance(SimChain chain, std::uint32_t n_blocks, std::uint64_t rng_seed);
    friend SimChain reorg(SimChain chain, std::uint32_t depth, std::uint64_t rng_seed);
    friend SimChain finalize(SimChain chain, std::uint64_t new_finalized_height);

    void append_blocks(std::uint32_t n, std::uint64_t seed, std::uint64_t stream);

    std::uint32_t domain_id_ = 0;
    std::vector<Block> blocks_;
    std::uint64_t finalized_height_ = 0;
    std::map<Digest, std::uint64_t> fork_store_;
    std::uint64_t reorg_count_ = 0;
};

Digest block_hash(std::uint32_t domain_id, std::uint64_t height, const Digest& parent, std::uint64_t draw);

// Throws InvalidArgument when n_blocks == 0.
SimChain advance(SimChain chain, std::uint32_t n_blocks, std::uint64_t rng_seed);
// Drops the top `depth` blocks into fork_store and grows depth + 1 fresh ones.
// Throws ReorgIntoFinalized when depth > tip - finalized.
SimChain reorg(SimChain chain, std::uint32_t depth, std::uint64_t rng_seed);
// Throws FinalityRegression / FinalityBeyondTip.
SimChain finalize(SimChain chain, std::uint64_t new_finalized_height);

// Throws DomainMismatch.
bool is_final(const SimChain& chain, const FinalityTag& tag);

} // namespace pcimkit
