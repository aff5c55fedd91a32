#include "pcimkit/harness/simulator.hpp"

#include <map>
#include <sstream>

#include "pcimkit/error.hpp"
#include "pcimkit/harness/world.hpp"

namespace pcimkit::harness {

namespace {

constexpr std::size_t kLeakWindow = 16;

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

class Run {
public:
    Run(const Scenario& s, std::uint64_t seed) : s_(s), world_(s, seed) {
        result_.scenario = s.name;
        result_.seed = seed;
        for (const auto& x : s.expected_outcomes) expected_[x.event_index] = x.outcome;
    }

    RunResult finish() && {
        scan_for_secrets();
        result_.matrix = world_.matrix();
        if (result_.matrix.total_missed() > 0) {
            result_.status = ExitStatus::ViolationMissed;
        } else if (!result_.mismatches.empty()) {
            result_.status = ExitStatus::ExpectationMismatch;
        }
        return std::move(result_);
    }

    void step(std::size_t index, const ScenarioEvent& ev) {
        try {
            std::visit(Overloaded{
                           [&](const AdvanceEvent& e) { world_.advance(e.domain, e.blocks); },
                           [&](const ReorgEvent& e) { world_.reorg(e.domain, e.depth); },
                           [&](const FinalizeEvent& e) { world_.finalize(e.domain, e.height); },
                           [&](const SendEvent& e) { sent_.insert_or_assign(e.msg, world_.build(e)); },
                           [&](const DeliverEvent& e) { deliver(index, e); },
                           [&](const ConsumeEvent& e) { consume(index, e); },
                           [&](const ExportEvent& e) { export_receipt(index, e); },
                       },
                       ev.event);
        } catch (const Error& e) {
            std::string what = e.what();
            if (e.code() == ErrorCode::ScenarioInvalid && what.starts_with(s_.name + ":")) throw;
            throw Error(ErrorCode::ScenarioInvalid, s_.name + ":" + std::to_string(ev.line) + ": " + what);
        }
    }

private:
    const Outgoing& message(const std::string& name) const {
        auto it = sent_.find(name);
        if (it == sent_.end()) throw Error(ErrorCode::ScenarioInvalid, "message '" + name + "' not sent yet");
        return it->second;
    }

    void expect(std::size_t index, std::string_view got) {
        auto it = expected_.find(index);
        if (it != expected_.end() && it->second != got) {
            result_.mismatches.push_back("event " + std::to_string(index) + ": expected " + it->second + ", got " +
                                         std::string(got));
        }
    }

    void deliver(std::size_t index, const DeliverEvent& e) {
        const Outgoing& honest = message(e.msg);
        const Outgoing* donor = e.with.empty() ? nullptr : &message(e.with);
        Delivery d = world_.mutate(honest, e.mutator, donor);
        DeliveryRecord rec = world_.deliver(honest, d);
        result_.reasons_seen.insert(rec.result.reason);
        result_.log.push_back(rec.log_line);
        expect(index, to_string(rec.result.reason));
    }

    void consume(std::size_t index, const ConsumeEvent& e) {
        const Outgoing& msg = message(e.msg);
        ConsumeRecord rec = world_.consume(msg, e.honest_secret);
        std::string body = "-";
        if (rec.transcript) {
            auto bytes = encode(*rec.transcript);
            emitted_.push_back(bytes.bytes());
            body = to_hex(bytes.view());
        }
        result_.log.push_back("consume " + to_hex(msg.pcim.pcm.identifier.digest) + " " + rec.outcome + " " + body);
        expect(index, rec.outcome);
    }

    void export_receipt(std::size_t index, const ExportEvent& e) {
        const Outgoing& msg = message(e.msg);
        ExportRecord rec = world_.export_receipt(msg);
        std::string body = "-";
        if (rec.receipt) {
            auto bytes = encode(*rec.receipt);
            emitted_.push_back(bytes.bytes());
            body = to_hex(bytes.view());
        }
        result_.log.push_back("export " + to_hex(msg.pcim.pcm.identifier.digest) + " " + rec.outcome + " " + body);
        expect(index, rec.outcome);
    }

    // Every inbox secret long enough to be meaningful must stay out of the
    // emitted transcripts, receipts and log, raw or hex-encoded.
    void scan_for_secrets() {
        for (const auto& [_, out] : sent_) {
            const Bytes& secret = out.spec.secret;
            if (secret.size() < kLeakWindow) continue;
            const std::string hex = to_hex(secret);
            bool leaked = false;
            for (const auto& b : emitted_) leaked = leaked || contains_subsequence(b, secret);
            for (const auto& line : result_.log) {
                leaked = leaked || line.find(hex) != std::string::npos ||
                         contains_subsequence(to_bytes(line), secret);
            }
            if (leaked) {
                result_.secret_leaked = true;
                world_.record_leak();
            }
        }
    }

    const Scenario& s_;
    World world_;
    RunResult result_;
    std::map<std::size_t, std::string> expected_;
    std::map<std::string, Outgoing> sent_;
    std::vector<Bytes> emitted_;
};

} // namespace

RunResult run_scenario(const Scenario& s, std::optional<std::uint64_t> seed_override) {
    validate_scenario(s);
    Run run(s, seed_override.value_or(s.seed));
    for (std::size_t i = 0; i < s.events.size(); ++i) run.step(i, s.events[i]);
    return std::move(run).finish();
}

std::string render_log(const RunResult& r) {
    std::string out;
    for (const auto& line : r.log) {
        out += line;
        out += '\n';
    }
    return out;
}

std::string render_report(const RunResult& r, ReportFormat format) {
    std::ostringstream os;
    if (format == ReportFormat::Structured) {
        os << "scenario " << r.scenario << "\n";
        os << "seed " << r.seed << "\n";
        os << "status " << static_cast<int>(r.status) << "\n";
        os << "attempts " << r.log.size() << "\n";
        for (const auto& m : r.mismatches) os << "mismatch " << m << "\n";
        if (r.secret_leaked) os << "secret_leaked 1\n";
        os << emit_allocation_report(r.matrix, format);
        return os.str();
    }
    os << "scenario: " << r.scenario << " (seed " << r.seed << ")\n";
    os << "attempts: " << r.log.size() << "\n";
    for (const auto& m : r.mismatches) os << "mismatch: " << m << "\n";
    if (r.secret_leaked) os << "secret leaked into emitted output\n";
    os << emit_allocation_report(r.matrix, format);
    switch (r.status) {
    case ExitStatus::Pass: os << "result: pass\n"; break;
    case ExitStatus::ExpectationMismatch: os << "result: expectation mismatch\n"; break;
    case ExitStatus::ViolationMissed: os << "result: invariant violation missed\n"; break;
    case ExitStatus::InvalidInput: os << "result: invalid input\n"; break;
    }
    return os.str();
}

} // namespace pcimkit::harness
