#include "pcimkit/harness/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pcimkit/error.hpp"
#include "pcimkit/inbox.hpp"
#include "pcimkit/merkle.hpp"
#include "pcimkit/portal.hpp"

namespace pcimkit::harness {

std::string_view to_string(Quadrant q) {
    switch (q) {
    case Quadrant::OnchainScalability: return "onchain_scalability";
    case Quadrant::OnchainPrivacy: return "onchain_privacy";
    case Quadrant::OffchainScalability: return "offchain_scalability";
    case Quadrant::OffchainPrivacy: return "offchain_privacy";
    }
    return "unknown";
}

std::string_view to_string(AdversaryKind k) {
    switch (k) {
    case AdversaryKind::Replayer: return "replayer";
    case AdversaryKind::Substituter: return "substituter";
    case AdversaryKind::PrefinalityForker: return "prefinality_forker";
    case AdversaryKind::OriginForger: return "origin_forger";
    case AdversaryKind::Reorderer: return "reorderer";
    }
    return "unknown";
}

std::optional<AdversaryKind> parse_adversary_kind(std::string_view name) {
    for (auto k : kAllAdversaries) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

namespace {

constexpr std::array<std::pair<MutatorKind, std::string_view>, 10> kMutators{{
    {MutatorKind::Identity, "identity"},
    {MutatorKind::SwapPublicValues, "swap_public_values"},
    {MutatorKind::SwapOpening, "swap_opening"},
    {MutatorKind::SwapProof, "swap_proof"},
    {MutatorKind::MutatePreRoot, "mutate_pre_root"},
    {MutatorKind::MutatePostRoot, "mutate_post_root"},
    {MutatorKind::ForgeOrigin, "forge_origin"},
    {MutatorKind::DropSignature, "drop_signature"},
    {MutatorKind::CorruptIdentifier, "corrupt_identifier"},
    {MutatorKind::WrongVk, "wrong_vk"},
}};

} // namespace

std::string_view to_string(MutatorKind m) {
    for (const auto& [k, n] : kMutators) {
        if (k == m) return n;
    }
    return "unknown";
}

std::optional<MutatorKind> parse_mutator(std::string_view name) {
    for (const auto& [k, n] : kMutators) {
        if (n == name) return k;
    }
    return std::nullopt;
}

namespace {

class Parser {
public:
    Parser(std::string name) : name_(std::move(name)) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::ScenarioInvalid, name_ + ":" + std::to_string(line_) + ": " + msg);
    }

    void set_line(std::size_t l) { line_ = l; }
    std::size_t line() const { return line_; }

    template <typename T>
    T number(std::string_view text, std::string_view what) const {
        T v{};
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            fail("invalid " + std::string(what) + " '" + std::string(text) + "'");
        }
        return v;
    }

    double real(std::string_view text, std::string_view what) const {
        try {
            std::size_t pos = 0;
            double v = std::stod(std::string(text), &pos);
            if (pos != text.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            fail("invalid " + std::string(what) + " '" + std::string(text) + "'");
        }
    }

    Bytes hex(std::string_view text, std::string_view what) const {
        try {
            return from_hex(text);
        } catch (const Error&) {
            fail("invalid hex for " + std::string(what));
        }
    }

    Digest digest(std::string_view text, std::string_view what) const {
        auto b = hex(text, what);
        if (b.size() != kDigestSize) fail(std::string(what) + " must be 32 octets");
        return Digest::from(b);
    }

    // Right-pads to 32 octets.
    Digest leaf_value(std::string_view text) const {
        auto b = hex(text, "leaf value");
        if (b.size() > kDigestSize) fail("leaf value longer than 32 octets");
        b.resize(kDigestSize, 0);
        return Digest::from(b);
    }

private:
    std::string name_;
    std::size_t line_ = 0;
};

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

using Args = std::map<std::string, std::string, std::less<>>;

class ArgReader {
public:
    ArgReader(const Parser& p, Args args) : p_(p), args_(std::move(args)) {}

    std::optional<std::string> take(std::string_view key) {
        auto it = args_.find(key);
        if (it == args_.end()) return std::nullopt;
        std::string v = it->second;
        args_.erase(it);
        return v;
    }

    std::string need(std::string_view key) {
        auto v = take(key);
        if (!v) p_.fail("missing argument '" + std::string(key) + "'");
        return *v;
    }

    void finish() const {
        if (!args_.empty()) p_.fail("unknown argument '" + args_.begin()->first + "'");
    }

private:
    const Parser& p_;
    Args args_;
};

RelationId parse_relation(const Parser& p, std::string_view v) {
    if (v == "merkle") return kMerkleTransition;
    if (v == "preimage") return kHashPreimage;
    if (v == "consumption") return kConsumptionReceipt;
    if (v == "inbox") return kInboxInjection;
    return RelationId{p.number<std::uint32_t>(v, "relation")};
}

Event parse_event(const Parser& p, std::string_view body, std::optional<std::string>& expect) {
    auto words = split(body, ' ');
    std::vector<std::string_view> tokens;
    for (auto w : words) {
        if (!w.empty()) tokens.push_back(w);
    }
    if (tokens.empty()) p.fail("empty event");

    Args args;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto eq = tokens[i].find('=');
        if (eq == std::string_view::npos || eq == 0) p.fail("expected key=value, got '" + std::string(tokens[i]) + "'");
        auto [it, inserted] = args.emplace(std::string(tokens[i].substr(0, eq)), std::string(tokens[i].substr(eq + 1)));
        if (!inserted) p.fail("duplicate argument '" + it->first + "'");
    }
    ArgReader a(p, std::move(args));
    expect = a.take("expect");

    const auto kind = tokens[0];
    Event ev;
    if (kind == "advance") {
        AdvanceEvent e{p.number<std::uint32_t>(a.need("domain"), "domain"),
                       p.number<std::uint32_t>(a.need("blocks"), "blocks")};
        if (e.blocks == 0) p.fail("advance needs blocks >= 1");
        ev = e;
    } else if (kind == "reorg") {
        ev = ReorgEvent{p.number<std::uint32_t>(a.need("domain"), "domain"),
                        p.number<std::uint32_t>(a.need("depth"), "depth")};
    } else if (kind == "finalize") {
        FinalizeEvent e{p.number<std::uint32_t>(a.need("domain"), "domain"), std::nullopt};
        if (auto h = a.take("height"); h && *h != "tip") e.height = p.number<std::uint64_t>(*h, "height");
        ev = e;
    } else if (kind == "send") {
        SendEvent e;
        e.msg = a.need("msg");
        auto k = a.need("kind");
        if (k == "pcm") e.kind = MessageKind::Pcm;
        else if (k == "pcim") e.kind = MessageKind::Pcim;
        else p.fail("kind must be pcm or pcim");
        e.origin = p.number<std::uint32_t>(a.need("origin"), "origin");
        e.dest = p.number<std::uint32_t>(a.need("dest"), "dest");
        e.sender = a.need("sender");
        e.seq = p.number<std::uint64_t>(a.need("seq"), "seq");
        e.relation = parse_relation(p, a.need("relation"));
        if (auto b = a.take("backend")) {
            e.backend = parse_backend_kind(*b);
            if (!e.backend) p.fail("unknown backend '" + *b + "'");
        }
        if (auto g = a.take("guardians")) e.guardians = p.number<std::uint32_t>(*g, "guardians");
        if (auto t = a.take("tag")) {
            if (*t == "tip") e.tag = TagPolicy::Tip;
            else if (*t == "finalized") e.tag = TagPolicy::Finalized;
            else {
                e.tag = TagPolicy::Height;
                e.tag_height = p.number<std::uint64_t>(*t, "tag height");
            }
        }
        if (auto u = a.take("updates")) {
            for (auto item : split(*u, ',')) {
                auto colon = item.find(':');
                if (colon == std::string_view::npos) p.fail("update must be <leaf>:<hex>");
                e.updates.push_back({p.number<std::uint32_t>(item.substr(0, colon), "leaf index"),
                                     p.leaf_value(item.substr(colon + 1))});
            }
        }
        if (auto pre = a.take("preimage")) e.preimage = p.hex(*pre, "preimage");
        if (auto s = a.take("secret")) e.secret = p.hex(*s, "secret");
        if (auto ps = a.take("params")) {
            for (auto item : split(*ps, ',')) {
                auto colon = item.find(':');
                if (colon == std::string_view::npos || colon == 0) p.fail("param must be <label>:<hex>");
                try {
                    e.params.add(std::string(item.substr(0, colon)), p.hex(item.substr(colon + 1), "param"));
                } catch (const Error& err) {
                    if (err.code() != ErrorCode::DuplicateLabel) throw;
                    p.fail("duplicate param label");
                }
            }
        }
        ev = std::move(e);
    } else if (kind == "deliver") {
        DeliverEvent e;
        e.msg = a.need("msg");
        if (auto m = a.take("mutator")) {
            auto mk = parse_mutator(*m);
            if (!mk) p.fail("unknown mutator '" + *m + "'");
            e.mutator = *mk;
        }
        if (auto w = a.take("with")) e.with = *w;
        if (e.mutator == MutatorKind::SwapProof && e.with.empty()) p.fail("swap_proof needs with=<msg>");
        ev = std::move(e);
    } else if (kind == "consume") {
        ConsumeEvent e;
        e.msg = a.need("msg");
        if (auto s = a.take("secret")) {
            if (*s == "honest") e.honest_secret = true;
            else if (*s == "wrong") e.honest_secret = false;
            else p.fail("secret must be honest or wrong");
        }
        ev = std::move(e);
    } else if (kind == "export") {
        ev = ExportEvent{a.need("msg")};
    } else {
        p.fail("unknown event '" + std::string(kind) + "'");
    }
    a.finish();
    return ev;
}

bool valid_expectation(const Event& ev, const std::string& outcome) {
    if (std::holds_alternative<DeliverEvent>(ev)) return parse_reason(outcome).has_value();
    if (std::holds_alternative<ConsumeEvent>(ev)) {
        return outcome == "OK" || outcome == "WrongSecret" || outcome == "AlreadyConsumed" || outcome == "NotFound";
    }
    if (std::holds_alternative<ExportEvent>(ev)) {
        return outcome == "OK" || outcome == "NoReceiptKey" || outcome == "NotFound";
    }
    return false;
}

} // namespace

Scenario parse_scenario(std::string_view text, std::string name) {
    Parser p(name);
    Scenario s;
    s.name = name;

    enum class Section { Top, Domain, Guardians, Events } section = Section::Top;
    DomainConfig* domain = nullptr;
    GuardianConfig* guardians = nullptr;
    bool saw_header = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        p.set_line(line_no);
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (!saw_header) {
            if (line != kScenarioHeader) p.fail("expected header '" + std::string(kScenarioHeader) + "'");
            saw_header = true;
            continue;
        }

        if (line.front() == '[') {
            if (line.back() != ']') p.fail("unterminated section header");
            auto parts = split(line.substr(1, line.size() - 2), ' ');
            if (parts[0] == "events" && parts.size() == 1) {
                section = Section::Events;
            } else if (parts[0] == "domain" && parts.size() == 2) {
                section = Section::Domain;
                s.domains.push_back(DomainConfig{p.number<std::uint32_t>(parts[1], "domain id")});
                domain = &s.domains.back();
            } else if (parts[0] == "guardians" && parts.size() == 2) {
                section = Section::Guardians;
                s.guardian_sets.emplace_back();
                guardians = &s.guardian_sets.back();
                guardians->set_id = p.number<std::uint32_t>(parts[1], "set id");
            } else {
                p.fail("unknown section '" + std::string(line) + "'");
            }
            continue;
        }

        if (line.rfind("event:", 0) == 0) {
            std::optional<std::string> expect;
            Event ev = parse_event(p, trim(line.substr(6)), expect);
            if (expect) {
                if (!valid_expectation(ev, *expect)) p.fail("invalid expectation '" + *expect + "'");
                s.expected_outcomes.push_back({s.events.size(), *expect});
            }
            s.events.push_back({std::move(ev), line_no});
            continue;
        }
        if (section == Section::Events) p.fail("expected 'event:' line");

        auto eq = line.find('=');
        if (eq == std::string_view::npos) p.fail("expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));

        switch (section) {
        case Section::Top:
            if (key == "seed") s.seed = p.number<std::uint64_t>(value, "seed");
            else if (key == "tree_depth") s.tree_depth = p.number<std::uint32_t>(value, "tree_depth");
            else if (key == "quadrant") {
                bool found = false;
                for (auto q : {Quadrant::OnchainScalability, Quadrant::OnchainPrivacy, Quadrant::OffchainScalability,
                               Quadrant::OffchainPrivacy}) {
                    if (to_string(q) == value) {
                        s.quadrant = q;
                        found = true;
                    }
                }
                if (!found) p.fail("unknown quadrant '" + std::string(value) + "'");
            } else if (key == "adversary") {
                auto colon = value.find(':');
                auto kind = parse_adversary_kind(value.substr(0, colon));
                if (!kind) p.fail("unknown adversary '" + std::string(value) + "'");
                std::uint32_t trials = 10;
                if (colon != std::string_view::npos) trials = p.number<std::uint32_t>(value.substr(colon + 1), "trials");
                if (trials == 0) p.fail("adversary trials must be >= 1");
                s.adversaries.push_back({*kind, trials});
            } else {
                p.fail("unknown key '" + std::string(key) + "'");
            }
            break;
        case Section::Domain:
            if (key == "finality_lag") domain->finality_lag = p.number<std::uint32_t>(value, "finality_lag");
            else if (key == "reorg_probability") {
                domain->reorg_probability = p.real(value, "reorg_probability");
                if (domain->reorg_probability < 0.0 || domain->reorg_probability > 1.0) {
                    p.fail("reorg_probability must lie in [0, 1]");
                }
            } else if (key == "reorg_max_depth") domain->reorg_max_depth = p.number<std::uint32_t>(value, "reorg_max_depth");
            else p.fail("unknown domain key '" + std::string(key) + "'");
            break;
        case Section::Guardians:
            if (key == "members") guardians->generated_members = p.number<std::size_t>(value, "members");
            else if (key == "member_seeds") {
                for (auto h : split(value, ',')) guardians->member_seeds.push_back(p.digest(h, "member seed"));
            } else if (key == "member_keys") {
                for (auto h : split(value, ',')) {
                    VerifyKey k;
                    k.bytes = p.digest(h, "member key").bytes;
                    guardians->member_keys.push_back(k);
                }
            } else if (key == "threshold") {
                auto t = p.number<unsigned>(value, "threshold");
                if (t == 0 || t > 255) p.fail("threshold must be in 1..255");
                guardians->threshold = static_cast<std::uint8_t>(t);
            } else {
                p.fail("unknown guardians key '" + std::string(key) + "'");
            }
            break;
        case Section::Events: break;
        }
    }
    if (!saw_header) {
        p.set_line(line_no);
        p.fail("missing header");
    }
    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ScenarioInvalid, path + ": cannot open");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    if (auto dot = base.rfind('.'); dot != std::string::npos) base = base.substr(0, dot);
    auto s = parse_scenario(buf.str(), path);
    s.name = base;
    return s;
}

void validate_scenario(const Scenario& s) {
    auto fail = [&](std::size_t line, const std::string& msg) {
        throw Error(ErrorCode::ScenarioInvalid, s.name + ":" + std::to_string(line) + ": " + msg);
    };

    if (s.tree_depth == 0 || s.tree_depth > 16) fail(0, "tree_depth must be in 1..16");

    std::set<std::uint32_t> domains;
    for (const auto& d : s.domains) {
        if (!domains.insert(d.domain_id).second) fail(0, "duplicate domain " + std::to_string(d.domain_id));
    }
    std::map<std::uint32_t, bool> can_sign;
    for (const auto& g : s.guardian_sets) {
        int sources = (g.generated_members > 0) + !g.member_seeds.empty() + !g.member_keys.empty();
        if (sources != 1) fail(0, "guardians " + std::to_string(g.set_id) + " needs exactly one of members, member_seeds, member_keys");
        std::size_t n = g.generated_members + g.member_seeds.size() + g.member_keys.size();
        if (n > 255) fail(0, "guardian set too large");
        if (g.threshold && *g.threshold > n) fail(0, "threshold exceeds member count");
        if (!can_sign.emplace(g.set_id, g.member_keys.empty()).second) {
            fail(0, "duplicate guardian set " + std::to_string(g.set_id));
        }
    }

    std::map<std::string, const SendEvent*> sends;
    for (const auto& se : s.events) {
        const auto line = se.line;
        auto need_domain = [&](std::uint32_t d) {
            if (!domains.count(d)) fail(line, "undeclared domain " + std::to_string(d));
        };
        auto need_msg = [&](const std::string& m) -> const SendEvent& {
            auto it = sends.find(m);
            if (it == sends.end()) fail(line, "unknown message '" + m + "'");
            return *it->second;
        };

        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, AdvanceEvent> || std::is_same_v<T, ReorgEvent> ||
                              std::is_same_v<T, FinalizeEvent>) {
                    need_domain(e.domain);
                } else if constexpr (std::is_same_v<T, SendEvent>) {
                    need_domain(e.origin);
                    need_domain(e.dest);
                    if (sends.count(e.msg)) fail(line, "duplicate message name '" + e.msg + "'");
                    if (e.relation.value < 1 || e.relation.value > 4) fail(line, "unknown relation");
                    if (e.kind == MessageKind::Pcim) {
                        if (s.guardian_sets.empty()) fail(line, "pcim needs a guardian set");
                        auto set = e.guardians.value_or(s.guardian_sets.front().set_id);
                        if (!can_sign.count(set)) fail(line, "unknown guardian set " + std::to_string(set));
                        if (!can_sign[set]) fail(line, "guardian set " + std::to_string(set) + " has no signing keys");
                    }
                    if (e.relation == kMerkleTransition) {
                        if (e.updates.empty()) fail(line, "merkle send needs updates=");
                        for (const auto& u : e.updates) {
                            if (u.index >= (std::uint64_t{1} << s.tree_depth)) fail(line, "leaf index out of range");
                        }
                    }
                    if (e.relation == kInboxInjection && e.secret.empty()) fail(line, "inbox send needs secret=");
                    if (e.relation == kInboxInjection && e.backend == BackendKind::TransparentReexec) {
                        fail(line, "transparent_reexec would publish the inbox secret");
                    }
                    if (e.relation == kConsumptionReceipt) fail(line, "consumption receipts are produced by export");
                    if (e.params.contains(kSecretLabel) || e.params.contains(kSecretCommitmentLabel) ||
                        e.params.contains(kSeqLabel)) {
                        fail(line, "reserved param label");
                    }
                    sends.emplace(e.msg, &e);
                } else if constexpr (std::is_same_v<T, DeliverEvent>) {
                    need_msg(e.msg);
                    if (!e.with.empty()) need_msg(e.with);
                } else if constexpr (std::is_same_v<T, ConsumeEvent> || std::is_same_v<T, ExportEvent>) {
                    const auto& send = need_msg(e.msg);
                    if (send.relation != kInboxInjection) fail(line, "'" + e.msg + "' is not an inbox message");
                }
            },
            se.event);
    }
    for (const auto& x : s.expected_outcomes) {
        if (x.event_index >= s.events.size()) fail(0, "expected outcome out of range");
    }
}

} // namespace pcimkit::harness
