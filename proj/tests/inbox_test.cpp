#include <doctest.h>

#include "pcimkit/inbox.hpp"
#include "portal_fixture.hpp"
#include "support.hpp"

using namespace pcimkit;
using testsupport::error_code_of;
using testsupport::PortalFixture;

namespace {

struct Deposit {
    InboxEntry entry;
    Bytes secret;
    Nonce nonce;
};

Deposit make_deposit(Rng& rng, std::size_t secret_len = 24) {
    Deposit d;
    d.secret = draw_bytes(rng, secret_len);
    d.nonce = draw_digest(rng);
    d.entry.identifier = Identifier{draw_digest(rng)};
    d.entry.public_params.add("amount", draw_bytes(rng, 8)).add("asset", to_bytes("usdc"));
    d.entry.secret_commitment = commit_secret(d.secret, d.entry.public_params, d.nonce);
    return d;
}

} // namespace

TEST_CASE("inject and lookup examples") {
    Rng rng = make_rng({71});
    auto d = make_deposit(rng);
    InboxState s = inject(d.entry, InboxState{});
    CHECK(lookup(s, d.entry.identifier) == d.entry);
    CHECK(error_code_of([&] { inject(d.entry, s); }) == ErrorCode::DuplicateEntry);
    CHECK(error_code_of([&] { lookup(s, Identifier{draw_digest(rng)}); }) == ErrorCode::NotFound);
}

TEST_CASE("consume examples") {
    Rng rng = make_rng({72});
    auto d = make_deposit(rng);
    InboxState s = inject(d.entry, InboxState{});

    auto wrong = d.secret;
    wrong[0] ^= 1;
    CHECK(error_code_of([&] { consume(d.entry.identifier, wrong, d.nonce, s); }) == ErrorCode::WrongSecret);
    CHECK(error_code_of([&] { consume(d.entry.identifier, d.secret, draw_digest(rng), s); }) == ErrorCode::WrongSecret);
    CHECK(s.nullifiers.empty());

    auto first = consume(d.entry.identifier, d.secret, d.nonce, s);
    CHECK(first.transcript.identifier == d.entry.identifier);
    CHECK(first.transcript.nullifier == derive_nullifier(d.entry.identifier, d.secret));
    CHECK(first.transcript.disclosed_outputs == d.entry.public_params);
    CHECK(first.state.nullifiers.count(first.transcript.nullifier) == 1);

    CHECK(error_code_of([&] { consume(d.entry.identifier, d.secret, d.nonce, first.state); }) ==
          ErrorCode::AlreadyConsumed);
    CHECK(error_code_of([&] { consume(Identifier{draw_digest(rng)}, d.secret, d.nonce, first.state); }) ==
          ErrorCode::NotFound);
}

TEST_CASE("nullifier matches the oracle vector") {
    const auto records = testsupport::load_golden(testsupport::data_path("golden_vectors.txt"));
    const auto alice = derive_identifier(1, to_bytes("alice"), 0);
    Bytes secret(16);
    for (std::size_t i = 0; i < 16; ++i) secret[i] = static_cast<Byte>(i);
    Bytes payload{0x0f};
    payload.insert(payload.end(), alice.digest.bytes.begin(), alice.digest.bytes.end());
    payload.insert(payload.end(), {0x10, 0, 0, 0});
    payload.insert(payload.end(), secret.begin(), secret.end());
    const auto* rec = testsupport::find_golden(records, "nullifier", payload);
    REQUIRE(rec != nullptr);
    CHECK(derive_nullifier(alice, secret).digest == rec->digest);
}

TEST_CASE("the same secret under two identifiers gives unlinkable nullifiers") {
    Rng rng = make_rng({73});
    const Bytes secret = draw_bytes(rng, 32);
    CHECK(derive_nullifier(Identifier{draw_digest(rng)}, secret) != derive_nullifier(Identifier{draw_digest(rng)}, secret));
}

TEST_CASE("disclosure schema limits transcript outputs") {
    Rng rng = make_rng({74});
    auto d = make_deposit(rng);
    InboxState s;
    s.disclosure_schema = std::vector<std::string>{"asset"};
    s = inject(d.entry, std::move(s));
    auto c = consume(d.entry.identifier, d.secret, d.nonce, s);
    REQUIRE(c.transcript.disclosed_outputs.size() == 1);
    CHECK(c.transcript.disclosed_outputs.entries()[0].label == "asset");
}

TEST_CASE("transcripts round trip") {
    Rng rng = make_rng({75});
    auto d = make_deposit(rng);
    auto c = consume(d.entry.identifier, d.secret, d.nonce, inject(d.entry, InboxState{}));
    CHECK(decode_transcript(encode(c.transcript).view()) == c.transcript);
}

TEST_CASE("export_receipt examples") {
    PortalFixture f(76);
    auto d = make_deposit(f.rng);
    auto c = consume(d.entry.identifier, d.secret, d.nonce, inject(d.entry, InboxState{}));

    auto r = export_receipt(c.transcript, &f.prover, f.router);
    CHECK(r.vk_id == f.receipt_vk);
    CHECK(r.public_values == receipt_public_values(c.transcript));
    CHECK(f.router.verify(r.proof, r.public_values, r.vk_id, f.relations));

    auto mutated = r.public_values.entries();
    ParamBundle altered;
    for (auto e : mutated) {
        if (e.label == "out.amount") e.value[0] ^= 1;
        altered.add(e.label, e.value);
    }
    CHECK_FALSE(f.router.verify(r.proof, altered, r.vk_id, f.relations));

    CHECK(error_code_of([&] { export_receipt(c.transcript, nullptr, f.router); }) == ErrorCode::NoReceiptKey);
    auto stranger = SigningKey::from_seed(draw_digest(f.rng));
    CHECK(error_code_of([&] { export_receipt(c.transcript, &stranger, f.router); }) == ErrorCode::NoReceiptKey);
}

TEST_CASE("a receipt submitted twice under a nullifier-derived identifier is a replay") {
    PortalFixture f(77);
    auto d = make_deposit(f.rng);
    auto c = consume(d.entry.identifier, d.secret, d.nonce, inject(d.entry, InboxState{}));
    auto r = export_receipt(c.transcript, &f.prover, f.router);

    // The application rule: identifier = derive_identifier(origin, nullifier, 0).
    Message m{PortalFixture::kOrigin, Bytes(c.transcript.nullifier.digest.bytes.begin(),
                                            c.transcript.nullifier.digest.bytes.end()),
              PortalFixture::kDest, kConsumptionReceipt, {}};
    m.body.add(std::string(kSeqLabel), encode_u64_le(0));
    Statement st{r.public_values, {}};
    auto h = f.finish(m, st, r.vk_id, r.proof, f.shadow.root(), f.shadow.root());

    CHECK(f.apply(h, false) == AcceptanceResult::ok());
    // A second copy with a fresh opening still carries the same identifier.
    auto again = f.finish(m, st, r.vk_id, r.proof, f.shadow.root(), f.shadow.root());
    CHECK(f.apply(again, false).reason == Reason::ReplayDetected);
}

TEST_CASE("relation 4 checks the secret commitment") {
    Rng rng = make_rng({78});
    auto rel = inbox_injection_relation();
    auto d = make_deposit(rng);
    const auto pv = injection_public_values(d.entry.secret_commitment, d.entry.public_params);
    CHECK(rel.check(pv, encode_injection_witness(d.nonce, d.secret)));
    auto wrong = d.secret;
    wrong.back() ^= 1;
    CHECK_FALSE(rel.check(pv, encode_injection_witness(d.nonce, wrong)));
    CHECK(entry_from_injection(d.entry.identifier, pv) == d.entry);

    ParamBundle sneaky = pv;
    sneaky.add(std::string(kSecretLabel), d.secret);
    CHECK_FALSE(entry_from_injection(d.entry.identifier, sneaky).has_value());
}

TEST_CASE("relation 3 checks the nullifier") {
    Rng rng = make_rng({79});
    auto rel = consumption_receipt_relation();
    const Identifier id{draw_digest(rng)};
    const Bytes secret = draw_bytes(rng, 20);
    ConsumptionTranscript t{id, derive_nullifier(id, secret), ParamBundle{}};
    CHECK(rel.check(receipt_public_values(t), encode_consumption_witness(id, secret)));
    CHECK_FALSE(rel.check(receipt_public_values(t), encode_consumption_witness(id, draw_bytes(rng, 20))));
}

TEST_CASE("property: consumption succeeds only with the exact committed secret (1e4 perturbations)") {
    Rng rng = make_rng({80});
    auto d = make_deposit(rng, 32);
    const InboxState s = inject(d.entry, InboxState{});
    int accepted = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Bytes guess = d.secret;
        switch (draw_below(rng, 4)) {
        case 0: guess[draw_below(rng, guess.size())] ^= static_cast<Byte>(1 + draw_below(rng, 255)); break;
        case 1: guess.pop_back(); break;
        case 2: guess.push_back(static_cast<Byte>(draw_below(rng, 256))); break;
        default: guess = draw_bytes(rng, draw_below(rng, 64)); break;
        }
        if (guess == d.secret) continue;
        try {
            consume(d.entry.identifier, guess, d.nonce, s);
            ++accepted;
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::WrongSecret);
        }
    }
    CHECK(accepted == 0);
}

TEST_CASE("property: at most one nullifier per entry over random interleavings") {
    Rng rng = make_rng({81});
    for (int run = 0; run < 100; ++run) {
        std::vector<Deposit> deposits;
        InboxState s;
        for (int i = 0; i < 5; ++i) {
            deposits.push_back(make_deposit(rng));
            s = inject(deposits.back().entry, std::move(s));
        }
        std::vector<int> successes(deposits.size(), 0);
        for (int step = 0; step < 30; ++step) {
            const auto k = draw_below(rng, deposits.size());
            try {
                auto c = consume(deposits[k].entry.identifier, deposits[k].secret, deposits[k].nonce, s);
                s = std::move(c.state);
                ++successes[k];
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::AlreadyConsumed);
            }
        }
        for (auto n : successes) CHECK(n <= 1);
        CHECK(s.nullifiers.size() == static_cast<std::size_t>(std::count(successes.begin(), successes.end(), 1)));
    }
}

TEST_CASE("property: secrets never surface in transcripts, log lines or receipts (1e3 trials)") {
    PortalFixture f(82);
    int leaks = 0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const Bytes secret = draw_bytes(f.rng, 16 + draw_below(f.rng, 33));
        ParamBundle pub;
        pub.add("amount", draw_bytes(f.rng, 8));
        Nonce nonce;
        auto h = f.injection(trial, secret, pub, nonce);
        f.attest_at(h, 3);
        const auto pre = f.state.current_root;
        auto a = f.accept_i(h);
        REQUIRE(a.result.accepted);
        f.state = a.state;
        const auto line = acceptance_log_line(h.pcim.pcm.identifier, a.result.reason, pre, f.state.current_root);

        auto entry = entry_from_injection(h.pcim.pcm.identifier, h.pcim.pcm.public_values);
        REQUIRE(entry.has_value());
        auto c = consume(entry->identifier, secret, nonce, inject(*entry, InboxState{}));
        auto r = export_receipt(c.transcript, &f.prover, f.router);

        const std::string hex = to_hex(secret);
        const bool leaked = contains_subsequence(encode(c.transcript).view(), secret) ||
                            contains_subsequence(encode(r).view(), secret) ||
                            contains_subsequence(to_bytes(line), secret) || line.find(hex) != std::string::npos;
        leaks += leaked ? 1 : 0;
    }
    CHECK(leaks == 0);
}
