#include "pcimkit/commitment.hpp"

#include "pcimkit/hash.hpp"

namespace pcimkit {

Commitment commit(const ParamBundle& params, const Nonce& nonce) {
    auto encoded = encode(params);
    Bytes payload(nonce.bytes.begin(), nonce.bytes.end());
    payload.insert(payload.end(), encoded.bytes().begin(), encoded.bytes().end());
    return Commitment{hash(DomainTag::Commit, payload)};
}

bool verify_opening(const Commitment& c, const Opening& o) {
    return commit(o.params, o.nonce) == c;
}

} // namespace pcimkit
