#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pcimkit/bytes.hpp"
#include "pcimkit/encoding.hpp"

namespace pcimkit {

struct ParamEntry {
    std::string label;
    Bytes value;

    bool operator==(const ParamEntry&) const = default;
};

// Ordered (label, value) list with unique labels. Order is part of the value.
class ParamBundle {
public:
    ParamBundle() = default;
    ParamBundle(std::initializer_list<ParamEntry> entries);

    // Throws DuplicateLabel.
    ParamBundle& add(std::string label, Bytes value);
    ParamBundle& add(std::string label, const Digest& value);

    const Bytes* find(std::string_view label) const;
    bool contains(std::string_view label) const { return find(label) != nullptr; }
    const std::vector<ParamEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    bool operator==(const ParamBundle&) const = default;

private:
    std::vector<ParamEntry> entries_;
};

CanonicalBytes encode(const ParamBundle& bundle);
void encode_into(Encoder& enc, const ParamBundle& bundle);
ParamBundle decode_param_bundle(Decoder& dec);
ParamBundle decode_param_bundle(ByteView bytes);

} // namespace pcimkit
