#include "pcimkit/params.hpp"

#include <algorithm>

#include "pcimkit/error.hpp"

namespace pcimkit {

ParamBundle::ParamBundle(std::initializer_list<ParamEntry> entries) {
    for (const auto& e : entries) add(e.label, e.value);
}

ParamBundle& ParamBundle::add(std::string label, Bytes value) {
    if (contains(label)) {
        throw Error(ErrorCode::DuplicateLabel, label);
    }
    entries_.push_back({std::move(label), std::move(value)});
    return *this;
}

ParamBundle& ParamBundle::add(std::string label, const Digest& value) {
    return add(std::move(label), Bytes(value.bytes.begin(), value.bytes.end()));
}

const Bytes* ParamBundle::find(std::string_view label) const {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const ParamEntry& e) { return e.label == label; });
    return it == entries_.end() ? nullptr : &it->value;
}

void encode_into(Encoder& enc, const ParamBundle& bundle) {
    enc.tag(TypeTag::ParamBundle).count(bundle.size());
    for (const auto& e : bundle.entries()) {
        enc.text(e.label).bytes(e.value);
    }
}

CanonicalBytes encode(const ParamBundle& bundle) {
    Encoder enc;
    encode_into(enc, bundle);
    return std::move(enc).finish();
}

ParamBundle decode_param_bundle(Decoder& dec) {
    dec.expect_tag(TypeTag::ParamBundle);
    auto n = dec.count();
    ParamBundle out;
    for (std::size_t i = 0; i < n; ++i) {
        auto label = dec.text();
        auto value = dec.bytes();
        try {
            out.add(std::move(label), std::move(value));
        } catch (const Error&) {
            throw Error(ErrorCode::DecodeFailure, "duplicate label in bundle");
        }
    }
    return out;
}

ParamBundle decode_param_bundle(ByteView bytes) {
    Decoder dec(bytes);
    auto out = decode_param_bundle(dec);
    dec.expect_done();
    return out;
}

} // namespace pcimkit
