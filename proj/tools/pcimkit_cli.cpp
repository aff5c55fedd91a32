// pcimkit command line: run one scenario, a directory of scenarios, or an adversary suite.
//
// Exit codes: 0 pass, 1 expectation mismatch, 2 invariant violation missed, 3 invalid input.
// PCIMKIT_SEED overrides a scenario's seed; --seed overrides both.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcimkit/error.hpp"
#include "pcimkit/harness/adversary.hpp"
#include "pcimkit/harness/simulator.hpp"

namespace fs = std::filesystem;
using namespace pcimkit;
using namespace pcimkit::harness;

namespace {

constexpr int kInvalidInput = static_cast<int>(ExitStatus::InvalidInput);
constexpr std::string_view kScenarioExtension = ".scenario";

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("PCIMKIT_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    std::string text(raw);
    if (!std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw Error(ErrorCode::ScenarioInvalid, "PCIMKIT_SEED must be a decimal integer");
    }
    return std::stoull(text);
}

std::optional<std::uint64_t> pick_seed(const std::optional<std::uint64_t>& flag) {
    return flag ? flag : env_seed();
}

int adversary_status(const AdversarySummary& s) {
    if (s.missed > 0) return static_cast<int>(ExitStatus::ViolationMissed);
    if (s.honest_rejected > 0) return static_cast<int>(ExitStatus::ExpectationMismatch);
    return 0;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& log_path,
            const std::string& report) {
    Scenario s = load_scenario(path);
    RunResult r = run_scenario(s, pick_seed(seed));
    if (!log_path.empty()) {
        std::ofstream out(log_path, std::ios::binary);
        if (!out) throw Error(ErrorCode::ScenarioInvalid, "cannot write log to " + log_path);
        out << render_log(r);
    }
    std::cout << render_report(r, report == "structured" ? ReportFormat::Structured : ReportFormat::Text);
    return static_cast<int>(r.status);
}

int cmd_suite(const std::string& dir, std::optional<std::uint64_t> seed) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::ScenarioInvalid, dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == kScenarioExtension) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    int worst = 0;
    std::set<Reason> reasons;
    std::set<AdversaryKind> kinds;
    AllocationMatrix total;
    for (const auto& f : files) {
        int status = 0;
        try {
            Scenario s = load_scenario(f.string());
            RunResult r = run_scenario(s, pick_seed(seed));
            reasons.insert(r.reasons_seen.begin(), r.reasons_seen.end());
            total += r.matrix;
            status = static_cast<int>(r.status);
            std::cout << s.name << ": status=" << status << " attempts=" << r.log.size() << "\n";
            for (const auto& m : r.mismatches) std::cout << "  mismatch " << m << "\n";
            for (const auto& a : s.adversaries) {
                AdversarySummary sum = run_adversary_suite(s, a.kind, a.trials);
                kinds.insert(a.kind);
                total += sum.matrix;
                std::cout << "  " << summary_line(sum) << "\n";
                status = std::max(status, adversary_status(sum));
            }
        } catch (const Error& e) {
            std::cout << f.filename().string() << ": invalid: " << e.what() << "\n";
            status = kInvalidInput;
        }
        worst = std::max(worst, status);
    }
    std::cout << "scenarios " << files.size() << " reasons_seen " << reasons.size() << "/" << kAllReasons.size()
              << " adversaries_seen " << kinds.size() << "/" << kAllAdversaries.size() << "\n";
    std::cout << emit_allocation_report(total, ReportFormat::Text);
    return worst;
}

int cmd_adversary(const std::string& path, const std::string& kind_name, std::uint32_t trials,
                  std::optional<std::uint64_t> seed) {
    auto kind = parse_adversary_kind(kind_name);
    if (!kind) throw Error(ErrorCode::ScenarioInvalid, "unknown adversary kind '" + kind_name + "'");
    Scenario s = load_scenario(path);
    if (auto chosen = pick_seed(seed)) s.seed = *chosen;
    AdversarySummary sum = run_adversary_suite(s, *kind, trials);
    std::cout << summary_line(sum) << "\n";
    std::cout << emit_allocation_report(sum.matrix, ReportFormat::Structured);
    return adversary_status(sum);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pcimkit scenario runner"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string path;
    std::string log_path;
    std::string report = "text";
    auto* run = app.add_subcommand("run", "Run one scenario file");
    run->add_option("scenario", path, "Scenario file")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--log", log_path, "Write the event log here");
    run->add_option("--report", report, "Report format")->check(CLI::IsMember({"text", "structured"}));

    std::string dir;
    auto* suite = app.add_subcommand("suite", "Run every *.scenario file in a directory");
    suite->add_option("directory", dir, "Scenario directory")->required();
    suite->add_option("--seed", seed, "Override every scenario seed");

    std::string kind;
    std::uint32_t trials = 0;
    auto* adversary = app.add_subcommand("adversary", "Run an adversary suite over a base scenario");
    adversary->add_option("scenario", path, "Base scenario file")->required();
    adversary->add_option("--kind", kind, "replayer|substituter|prefinality_forker|origin_forger|reorderer")->required();
    adversary->add_option("--trials", trials, "Number of trials")->required()->check(CLI::PositiveNumber);
    adversary->add_option("--seed", seed, "Override the scenario seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidInput;
    }

    try {
        if (*run) return cmd_run(path, seed, log_path, report);
        if (*suite) return cmd_suite(dir, seed);
        return cmd_adversary(path, kind, trials, seed);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
}
