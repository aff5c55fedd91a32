#include <doctest.h>

#include "oracle/instances.hpp"
#include "pcimkit/merkle.hpp"
#include "pcimkit/relations.hpp"
#include "support.hpp"

using namespace pcimkit;
using testsupport::error_code_of;

using oracle::chained;
using oracle::library_tree;
using oracle::random_tree;

TEST_CASE("registry examples") {
    RelationRegistry r;
    CHECK(error_code_of([&] { r.get(RelationId{9}); }) == ErrorCode::UnknownRelation);
    r.register_relation(hash_preimage_relation());
    CHECK(r.get(kHashPreimage).name == hash_preimage_relation().name);
    CHECK(error_code_of([&] { r.register_relation(hash_preimage_relation()); }) == ErrorCode::DuplicateRelationId);

    auto builtins = RelationRegistry::with_builtins();
    CHECK(builtins.contains(kMerkleTransition));
    CHECK(builtins.contains(kHashPreimage));
    CHECK_FALSE(builtins.contains(kInboxInjection));

    RelationDescriptor broken{RelationId{77}, "broken", [](const ParamBundle&, ByteView) { return true; }, true, {}};
    CHECK(error_code_of([&] { r.register_relation(broken); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("hash-preimage relation") {
    auto rel = hash_preimage_relation();
    const Bytes w = to_bytes("preimage");
    ParamBundle pv;
    pv.add("h", hash(DomainTag::Commit, w));
    CHECK(rel.check(pv, w));
    CHECK_FALSE(rel.check(pv, to_bytes("preimagf")));
    CHECK_FALSE(rel.check(ParamBundle{}, w));
    ParamBundle wrong_tag;
    wrong_tag.add("h", hash(DomainTag::Ident, w));
    CHECK_FALSE(rel.check(wrong_tag, w));
}

TEST_CASE("empty roots agree with the golden vectors") {
    const auto records = testsupport::load_golden(testsupport::data_path("golden_vectors.txt"));
    std::vector<Digest> roots;
    for (const auto& r : records) {
        if (r.tag == "root" && r.payload.size() == 64) roots.push_back(r.digest);
    }
    REQUIRE(roots.size() == 8);
    for (std::uint32_t d = 1; d <= 8; ++d) CHECK(MerkleTree::empty_root(d).digest == roots[d - 1]);
    CHECK(MerkleTree(8).root() == MerkleTree::empty_root(8));
    CHECK(oracle::FullTree(4).root() == MerkleTree::empty_root(4).digest);
}

TEST_CASE("merkle_transition_check examples") {
    Rng rng = make_rng({41});
    MerkleTree tree(4);
    for (std::uint32_t i = 0; i < 16; ++i) tree.set_leaf(i, draw_digest(rng));

    SUBCASE("identity update") {
        const auto pre = tree.root();
        auto cmd = tree.update(5, tree.leaf(5));
        CHECK(tree.root() == pre);
        CHECK(merkle_transition_check(pre, pre, cmd));
        StateRoot other = pre;
        other.digest.bytes[0] ^= 1;
        CHECK_FALSE(merkle_transition_check(pre, other, cmd));
    }
    SUBCASE("honest update of leaf 3 matches a brute-force rebuild") {
        oracle::FullTree full(4);
        for (std::uint32_t i = 0; i < 16; ++i) full.leaves[i] = tree.leaf(i);
        const auto pre = tree.root();
        REQUIRE(pre.digest == full.root());
        const Digest v = draw_digest(rng);
        auto cmd = tree.update(3, v);
        full.leaves[3] = v;
        CHECK(tree.root().digest == full.root());
        CHECK(merkle_transition_check(pre, tree.root(), cmd));

        auto corrupted = cmd;
        corrupted.merkle_path[2].sibling.bytes[7] ^= 0x40;
        CHECK_FALSE(merkle_transition_check(pre, tree.root(), corrupted));
    }
    SUBCASE("sides must agree with the index") {
        const auto pre = tree.root();
        auto cmd = tree.update(6, draw_digest(rng));
        auto flipped = cmd;
        flipped.merkle_path[0].side = flipped.merkle_path[0].side == Side::Left ? Side::Right : Side::Left;
        CHECK_FALSE(merkle_transition_check(pre, tree.root(), flipped));
        auto moved = cmd;
        moved.leaf_index = 7;
        CHECK_FALSE(merkle_transition_check(pre, tree.root(), moved));
    }
}

TEST_CASE("command lists round trip through the canonical encoding") {
    Rng rng = make_rng({42});
    MerkleTree tree(5);
    std::vector<UpdateCommand> cmds;
    for (int i = 0; i < 6; ++i) cmds.push_back(tree.update(static_cast<std::uint32_t>(draw_below(rng, 32)), draw_digest(rng)));
    auto enc = encode_command_list(cmds);
    CHECK(decode_command_list(enc.view()) == cmds);
    Bytes bad = enc.bytes();
    bad.pop_back();
    CHECK(error_code_of([&] { decode_command_list(bad); }) == ErrorCode::DecodeFailure);
}

TEST_CASE("property: transition check agrees with the brute-force oracle (1e4 cases)") {
    Rng rng = make_rng({43});
    int agreed_true = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto x = oracle::random_instance(rng);
        const bool expected = x.full.accepts(x.pre, x.post, x.cmd);
        agreed_true += expected ? 1 : 0;
        CHECK(merkle_transition_check(x.pre, x.post, x.cmd) == expected);
    }
    CHECK(agreed_true > 500);
}

TEST_CASE("batch_compose examples") {
    Rng rng = make_rng({44});
    MerkleTree tree(4);
    auto one = chained(rng, tree, 1);
    CHECK(batch_compose(one) == one[0]);

    oracle::FullTree full(4);
    MerkleTree t2(4);
    auto two = chained(rng, t2, 2);
    for (const auto& s : two) {
        for (const auto& c : s.commands) full.leaves[c.leaf_index] = Digest::from(c.new_leaf);
    }
    auto composed = batch_compose(two);
    CHECK(composed.pre_root == two[0].pre_root);
    CHECK(composed.post_root.digest == full.root());
    CHECK(check_transition(composed));
    CHECK(composed.commands.size() == two[0].commands.size() + two[1].commands.size());

    auto broken = two;
    std::swap(broken[0], broken[1]);
    CHECK(error_code_of([&] { batch_compose(broken); }) == ErrorCode::BatchChainBroken);
    CHECK(error_code_of([&] { batch_compose(std::span<const TransitionStatement>{}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("property: batch equivalence and associativity") {
    Rng rng = make_rng({45});
    for (int trial = 0; trial < 500; ++trial) {
        MerkleTree tree(static_cast<std::uint32_t>(1 + draw_below(rng, 4)));
        const auto n = 1 + draw_below(rng, 8);
        auto stmts = chained(rng, tree, n);

        bool sequential = true;
        for (const auto& s : stmts) sequential = sequential && check_transition(s);
        const auto whole = batch_compose(stmts);
        CHECK(check_transition(whole) == sequential);
        CHECK(whole.post_root == tree.root());

        if (n >= 2) {
            const auto cut = 1 + draw_below(rng, n - 1);
            std::vector<TransitionStatement> left(stmts.begin(), stmts.begin() + static_cast<std::ptrdiff_t>(cut));
            std::vector<TransitionStatement> right(stmts.begin() + static_cast<std::ptrdiff_t>(cut), stmts.end());
            std::vector<TransitionStatement> grouped{batch_compose(left), batch_compose(right)};
            CHECK(batch_compose(grouped) == whole);
        }

        // A corrupted element makes both sides fail together.
        auto bad = stmts;
        auto& victim = bad[draw_below(rng, n)];
        victim.commands[0].merkle_path[0].sibling.bytes[0] ^= 1;
        bool seq_bad = true;
        for (const auto& s : bad) seq_bad = seq_bad && check_transition(s);
        CHECK_FALSE(seq_bad);
        CHECK_FALSE(check_transition(batch_compose(bad)));
    }
}

TEST_CASE("relation 1 through the statement encoding") {
    Rng rng = make_rng({46});
    MerkleTree tree(3);
    auto stmts = chained(rng, tree, 2);
    auto rel = merkle_transition_relation();
    CHECK(rel.batchable);
    auto st = to_statement(stmts[0]);
    CHECK(rel.check(st.public_values, st.witness));
    CHECK(from_statement(st) == stmts[0]);

    std::vector<Statement> pair{to_statement(stmts[0]), to_statement(stmts[1])};
    auto composed = rel.batch_compose(pair);
    CHECK(rel.check(composed.public_values, composed.witness));
    CHECK(from_statement(composed) == batch_compose(stmts));

    auto tampered = st;
    tampered.witness.back() ^= 1;
    CHECK_FALSE(rel.check(tampered.public_values, tampered.witness));
    CHECK_FALSE(rel.check(st.public_values, Bytes{0xff}));
}
