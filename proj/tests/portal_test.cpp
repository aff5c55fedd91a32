#include <doctest.h>

#include "portal_fixture.hpp"
#include "support.hpp"

using namespace pcimkit;
using testsupport::Honest;
using testsupport::PortalFixture;

TEST_CASE("accept_pcm examples") {
    PortalFixture f(61);
    auto a = f.transition(0, 3);
    const auto before = f.state.current_root;

    auto ok = f.accept(a);
    CHECK(ok.result == AcceptanceResult::ok());
    CHECK(ok.state.current_root == a.pcim.pcm.post_root);
    CHECK(ok.state.current_root != before);
    CHECK(ok.state.replay_registry.count(a.pcim.pcm.identifier) == 1);
    f.state = ok.state;

    auto again = f.accept(a);
    CHECK(again.result.reason == Reason::ReplayDetected);
    CHECK(again.state == f.state);

    auto b = f.preimage(1, to_bytes("w"));
    auto swapped = b;
    swapped.pcim.pcm.public_values = ParamBundle{{"h", Bytes(32, 9)}};
    CHECK(f.accept(swapped).result.reason == Reason::BindingMismatch);
    CHECK(f.accept(b).result.accepted);
}

TEST_CASE("accept_pcim examples") {
    PortalFixture f(62);
    auto a = f.preimage(0, to_bytes("x"));
    f.attest_at(a, 3);
    CHECK(f.accept_i(a).result == AcceptanceResult::ok());

    auto early = f.preimage(1, to_bytes("y"));
    f.attest_at(early, 5);
    CHECK(f.accept_i(early).result.reason == Reason::NotFinal);

    // Threshold-1 real members plus an outsider, signed by hand since attest() refuses.
    auto forged = f.preimage(2, to_bytes("z"));
    f.attest_at(forged, 2);
    auto outsider = SigningKey::from_seed(draw_digest(f.rng));
    auto& sigs = forged.pcim.attestation.signatures;
    sigs.back().signature = outsider.sign(forged.pcim.attestation.signed_digest.view());
    CHECK(f.accept_i(forged).result.reason == Reason::OriginInvalid);
}

TEST_CASE("relay examples") {
    PortalFixture f(63);
    auto a = f.preimage(0, to_bytes("relay me"));
    f.attest_at(a, 2);

    CHECK(encode(relay(a.pcim, Mutator{})) == encode(a.pcim));
    CHECK(encode(relay(a.pcim, [](Pcim p) { return p; })) == encode(a.pcim));

    auto swapped_pv = relay(a.pcim, [](Pcim p) {
        p.pcm.public_values = ParamBundle{};
        p.pcm.public_values.add("h", hash(DomainTag::Commit, to_bytes("other")));
        return p;
    });
    CHECK(accept_pcim(swapped_pv, a.opening, f.state, f.ctx()).result.reason == Reason::BindingMismatch);

    // A genuine proof, but of different public values.
    auto donor = f.preimage(9, to_bytes("donor"));
    auto swapped_proof = relay(a.pcim, [&](Pcim p) {
        p.pcm.proof = donor.pcim.pcm.proof;
        return p;
    });
    const auto reason = accept_pcim(swapped_proof, a.opening, f.state, f.ctx()).result.reason;
    CHECK((reason == Reason::ProofInvalid || reason == Reason::BindingMismatch));
}

TEST_CASE("structural faults are MalformedMessage") {
    PortalFixture f(64);
    auto a = f.preimage(0, to_bytes("s"));
    f.attest_at(a, 1);

    auto wrong_dest = a;
    wrong_dest.pcim.pcm.m.dest_domain = 9;
    CHECK(f.accept(wrong_dest).result.reason == Reason::MalformedMessage);

    auto no_seq = a;
    no_seq.pcim.pcm.m.body = ParamBundle{};
    CHECK(f.accept(no_seq).result.reason == Reason::MalformedMessage);

    auto short_seq = a;
    short_seq.pcim.pcm.m.body = ParamBundle{{std::string(kSeqLabel), Bytes(4, 0)}};
    CHECK(f.accept(short_seq).result.reason == Reason::MalformedMessage);

    auto bad_id = a;
    bad_id.pcim.pcm.identifier.digest.bytes[31] ^= 1;
    CHECK(f.accept(bad_id).result.reason == Reason::MalformedMessage);

    auto foreign_tag = a;
    foreign_tag.pcim.finality_tag.domain_id = 5;
    CHECK(f.accept_i(foreign_tag).result.reason == Reason::MalformedMessage);
}

TEST_CASE("check order is fixed") {
    PortalFixture f(65);
    auto a = f.preimage(0, to_bytes("o"));
    f.attest_at(a, 5); // not final
    REQUIRE(f.accept_i(a).result.reason == Reason::NotFinal);

    SUBCASE("origin before finality") {
        auto both = a;
        both.pcim.attestation.signatures.pop_back();
        CHECK(f.accept_i(both).result.reason == Reason::OriginInvalid);
    }
    SUBCASE("replay before binding, proof and root") {
        auto b = f.preimage(1, to_bytes("p"));
        REQUIRE(f.apply(b, false).accepted);
        auto broken = b;
        broken.pcim.pcm.public_values = ParamBundle{};
        broken.pcim.pcm.proof.payload.clear();
        broken.pcim.pcm.pre_root.digest.bytes[0] ^= 1;
        CHECK(f.accept(broken).result.reason == Reason::ReplayDetected);
    }
    SUBCASE("binding before proof") {
        auto b = f.preimage(2, to_bytes("q"));
        b.pcim.pcm.proof.payload.clear();
        b.opening.nonce.bytes[0] ^= 1;
        CHECK(f.accept(b).result.reason == Reason::BindingMismatch);
    }
    SUBCASE("proof before root") {
        auto c = f.transition(3, 1);
        auto d = f.transition(4, 2);
        auto bad = d;
        bad.pcim.pcm.proof = prove_transparent(Bytes{1, 2, 3});
        CHECK(f.accept(bad).result.reason == Reason::ProofInvalid);
        CHECK(f.accept(d).result.reason == Reason::RootMismatch);
        CHECK(f.apply(c, false).accepted);
        CHECK(f.apply(d, false).accepted);
    }
}

TEST_CASE("every rejection reason is reachable and deterministic") {
    PortalFixture f(66);
    std::map<Reason, std::pair<Honest, bool>> witnesses;

    auto ok = f.preimage(0, to_bytes("ok"));
    f.attest_at(ok, 2);
    witnesses[Reason::OK] = {ok, true};

    auto seen = f.preimage(1, to_bytes("seen"));
    REQUIRE(f.apply(seen, false).accepted);
    witnesses[Reason::ReplayDetected] = {seen, false};

    auto origin = f.preimage(2, to_bytes("origin"));
    f.attest_at(origin, 2);
    origin.pcim.attestation.set_id = 99;
    witnesses[Reason::OriginInvalid] = {origin, true};

    auto fin = f.preimage(3, to_bytes("fin"));
    f.attest_at(fin, 6);
    witnesses[Reason::NotFinal] = {fin, true};

    auto bind = f.preimage(4, to_bytes("bind"));
    bind.pcim.pcm.commitment.digest.bytes[0] ^= 1;
    witnesses[Reason::BindingMismatch] = {bind, false};

    auto proof = f.preimage(5, to_bytes("proof"));
    proof.pcim.pcm.vk_id = f.merkle_vk; // verifier for a different relation
    witnesses[Reason::ProofInvalid] = {proof, false};

    f.transition(6, 0); // moves the shadow tree; the portal has not seen it
    auto root = f.transition(7, 1);
    witnesses[Reason::RootMismatch] = {root, false};

    auto malformed = f.preimage(8, to_bytes("m"));
    malformed.pcim.pcm.m.sender = to_bytes("mallory");
    witnesses[Reason::MalformedMessage] = {malformed, false};

    REQUIRE(witnesses.size() == kAllReasons.size());
    for (auto& [reason, w] : witnesses) {
        CAPTURE(to_string(reason));
        const auto r1 = w.second ? f.accept_i(w.first) : f.accept(w.first);
        const auto r2 = w.second ? f.accept_i(w.first) : f.accept(w.first);
        CHECK(r1.result.reason == reason);
        CHECK(r1.result.accepted == (reason == Reason::OK));
        CHECK(r1.result == r2.result);
        CHECK(r1.state == r2.state);
    }
}

TEST_CASE("missing guardian set or chain view") {
    PortalFixture f(67);
    auto a = f.preimage(0, to_bytes("a"));
    f.attest_at(a, 1);
    std::map<std::uint32_t, GuardianSet> no_sets;
    std::map<std::uint32_t, SimChain> no_chains;
    CHECK(accept_pcim(a.pcim, a.opening, f.state, {PortalFixture::kDest, no_sets, f.chains, f.relations, f.router})
              .result.reason == Reason::OriginInvalid);
    CHECK(accept_pcim(a.pcim, a.opening, f.state, {PortalFixture::kDest, f.sets, no_chains, f.relations, f.router})
              .result.reason == Reason::NotFinal);
}

TEST_CASE("property: rejected attempts leave the state bitwise unchanged") {
    PortalFixture f(68);
    for (std::uint64_t s = 0; s < 3; ++s) REQUIRE(f.apply(f.transition(s, static_cast<std::uint32_t>(s)), false).accepted);

    std::uint64_t seq = 100;
    int rejected = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const auto shadow_before = f.shadow;
        const bool as_pcim = draw_below(f.rng, 2) == 0;
        Honest h = draw_below(f.rng, 2) == 0 ? f.preimage(seq, draw_bytes(f.rng, 8)) : f.transition(seq, 5);
        ++seq;
        if (as_pcim) f.attest_at(h, draw_below(f.rng, 7));
        const auto mutation = draw_below(f.rng, 7);
        switch (mutation) {
        case 0: h.pcim.pcm.public_values.add("extra", Bytes{1}); break;
        case 1: h.opening.nonce.bytes[3] ^= 4; break;
        case 2: h.pcim.pcm.proof.payload.push_back(0); break;
        case 3: h.pcim.pcm.post_root.digest.bytes[1] ^= 2; break;
        case 4: h.pcim.pcm.identifier.digest.bytes[0] ^= 1; break;
        case 5: h.pcim.pcm.vk_id.digest.bytes[0] ^= 1; break;
        default: h.pcim.attestation.signed_digest.bytes[0] ^= 1; break;
        }
        const auto snapshot = f.state;
        const auto a = as_pcim ? f.accept_i(h) : f.accept(h);
        if (a.result.accepted) {
            // A PCM carries no attestation, so the last mutation leaves it honest.
            CHECK((!as_pcim && mutation == 6));
            f.state = a.state;
        } else {
            ++rejected;
            CHECK(a.state == snapshot);
            f.shadow = shadow_before;
        }
    }
    CHECK(rejected > 1500);
}

TEST_CASE("pcim encoding round trips") {
    PortalFixture f(69);
    auto a = f.transition(0, 4);
    f.attest_at(a, 3);
    CHECK(decode_pcim(encode(a.pcim).view()) == a.pcim);
    CHECK(decode_pcm(encode(a.pcim.pcm).view()) == a.pcim.pcm);
    CHECK(decode_message(encode(a.pcim.pcm.m).view()) == a.pcim.pcm.m);
    Bytes bytes = encode(a.pcim).bytes();
    bytes.push_back(0);
    CHECK(testsupport::error_code_of([&] { decode_pcim(bytes); }) == ErrorCode::DecodeFailure);
}

TEST_CASE("acceptance log line format") {
    Identifier id{digest_from_hex(std::string(64, 'a'))};
    StateRoot pre{digest_from_hex(std::string(64, 'b'))};
    StateRoot post{digest_from_hex(std::string(64, 'c'))};
    CHECK(acceptance_log_line(id, Reason::RootMismatch, pre, post) ==
          std::string(64, 'a') + " RootMismatch " + std::string(64, 'b') + " " + std::string(64, 'c'));
    for (auto r : kAllReasons) CHECK(parse_reason(to_string(r)) == r);
    CHECK_FALSE(parse_reason("Accepted").has_value());
}
