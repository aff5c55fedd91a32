#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "pcimkit/bytes.hpp"

namespace pcimkit {

// mt19937_64 and seed_seq are fully specified by the standard, so runs are
// reproducible across platforms.
using Rng = std::mt19937_64;

Rng make_rng(std::initializer_list<std::uint64_t> seed_words);
Digest draw_digest(Rng& rng);
Bytes draw_bytes(Rng& rng, std::size_t n);
std::uint64_t draw_below(Rng& rng, std::uint64_t bound); // uniform in [0, bound)

} // namespace pcimkit
