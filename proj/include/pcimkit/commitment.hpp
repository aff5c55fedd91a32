#pragma once

// Salted hash commitment: Com(params; nonce) = hash("commit", nonce || encode(params)).
// Binding from collision resistance; the nonce supplies hiding for secret-bearing bundles.

#include "pcimkit/bytes.hpp"
#include "pcimkit/params.hpp"

namespace pcimkit {

using Nonce = Digest;

struct Commitment {
    Digest digest;
    auto operator<=>(const Commitment&) const = default;
};

struct Opening {
    Nonce nonce;
    ParamBundle params;

    bool operator==(const Opening&) const = default;
};

Commitment commit(const ParamBundle& params, const Nonce& nonce);
bool verify_opening(const Commitment& c, const Opening& o);

} // namespace pcimkit
