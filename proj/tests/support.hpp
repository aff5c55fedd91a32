#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pcimkit/bytes.hpp"
#include "pcimkit/error.hpp"
#include "pcimkit/params.hpp"
#include "pcimkit/rng.hpp"

namespace testsupport {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string data_path(const std::string& name) { return std::string(PCIMKIT_TEST_DATA_DIR) + "/" + name; }
inline std::string scenario_path(const std::string& name) {
    return std::string(PCIMKIT_SCENARIO_DIR) + "/" + name;
}

struct GoldenRecord {
    std::string tag;
    pcimkit::Bytes payload;
    pcimkit::Digest digest;
};

// `tag hex(payload) hex(digest)`, with "-" for an empty payload.
inline std::vector<GoldenRecord> load_golden(const std::string& path) {
    std::vector<GoldenRecord> out;
    std::istringstream in(read_file(path));
    std::string tag, payload, digest;
    while (in >> tag >> payload >> digest) {
        out.push_back({tag, payload == "-" ? pcimkit::Bytes{} : pcimkit::from_hex(payload),
                       pcimkit::digest_from_hex(digest)});
    }
    return out;
}

inline const GoldenRecord* find_golden(const std::vector<GoldenRecord>& records, const std::string& tag,
                                       pcimkit::ByteView payload) {
    for (const auto& r : records) {
        if (r.tag == tag && pcimkit::ByteView(r.payload).size() == payload.size() &&
            std::equal(payload.begin(), payload.end(), r.payload.begin())) {
            return &r;
        }
    }
    return nullptr;
}

inline pcimkit::ParamBundle random_bundle(pcimkit::Rng& rng, std::size_t max_entries = 4) {
    pcimkit::ParamBundle b;
    const auto n = pcimkit::draw_below(rng, max_entries + 1);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::string label = "p" + std::to_string(i);
        const auto extra = pcimkit::draw_below(rng, 3);
        for (std::uint64_t k = 0; k < extra; ++k) label += static_cast<char>('a' + pcimkit::draw_below(rng, 3));
        b.add(label, pcimkit::draw_bytes(rng, pcimkit::draw_below(rng, 6)));
    }
    return b;
}

template <class F>
pcimkit::ErrorCode error_code_of(F&& f) {
    try {
        f();
    } catch (const pcimkit::Error& e) {
        return e.code();
    }
    throw std::runtime_error("expected pcimkit::Error");
}

} // namespace testsupport
