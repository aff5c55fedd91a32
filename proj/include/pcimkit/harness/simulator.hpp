#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pcimkit/harness/allocation.hpp"
#include "pcimkit/harness/scenario.hpp"
#include "pcimkit/portal.hpp"

namespace pcimkit::harness {

enum class ExitStatus : int { Pass = 0, ExpectationMismatch = 1, ViolationMissed = 2, InvalidInput = 3 };

struct RunResult {
    std::string scenario;
    std::uint64_t seed = 0;
    // Deliveries log as acceptance lines; consume/export attempts as
    // `consume hex(id) outcome hex(transcript)|-` and `export hex(id) outcome hex(receipt)|-`.
    std::vector<std::string> log;
    AllocationMatrix matrix;
    std::vector<std::string> mismatches; // "event N: expected X, got Y"
    std::set<Reason> reasons_seen;
    bool secret_leaked = false;
    ExitStatus status = ExitStatus::Pass;
};

// Throws ScenarioInvalid for events that cannot be executed (e.g. a reorg into finalized history).
RunResult run_scenario(const Scenario& s, std::optional<std::uint64_t> seed_override = std::nullopt);

std::string render_log(const RunResult& r);
std::string render_report(const RunResult& r, ReportFormat format);

} // namespace pcimkit::harness
