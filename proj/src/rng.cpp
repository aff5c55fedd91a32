#include "pcimkit/rng.hpp"

#include <vector>

namespace pcimkit {

Rng make_rng(std::initializer_list<std::uint64_t> seed_words) {
    std::vector<std::uint32_t> words;
    for (auto w : seed_words) {
        words.push_back(static_cast<std::uint32_t>(w));
        words.push_back(static_cast<std::uint32_t>(w >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

Bytes draw_bytes(Rng& rng, std::size_t n) {
    Bytes out(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 8 == 0) word = rng();
        out[i] = static_cast<Byte>(word >> (8 * (i % 8)));
    }
    return out;
}

Digest draw_digest(Rng& rng) {
    return Digest::from(draw_bytes(rng, kDigestSize));
}

// std::uniform_int_distribution is implementation-defined; this is not.
std::uint64_t draw_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

} // namespace pcimkit
