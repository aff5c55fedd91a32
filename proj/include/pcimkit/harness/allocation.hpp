#pragma once

// Invariant x enforcing-module matrix. Each invariant is allocated to one
// module; cells count checks exercised, violations caught (the check
// rejected) and violations missed (accepted despite a known violation).

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "pcimkit/portal.hpp"

namespace pcimkit::harness {

enum class Invariant { OriginAuthenticity, ReplaySafety, FinalityAlignment, ParameterBinding, PrivateConsumption };
enum class Enforcer { Attestation, Finality, Portal, CryptoCorePortal, Inbox };

inline constexpr std::array<Invariant, 5> kAllInvariants{
    Invariant::OriginAuthenticity, Invariant::ReplaySafety, Invariant::FinalityAlignment,
    Invariant::ParameterBinding, Invariant::PrivateConsumption};
inline constexpr std::array<Enforcer, 5> kAllEnforcers{Enforcer::Attestation, Enforcer::Finality, Enforcer::Portal,
                                                       Enforcer::CryptoCorePortal, Enforcer::Inbox};

std::string_view to_string(Invariant inv);
std::string_view to_string(Enforcer e);
Enforcer enforcer_of(Invariant inv);

// Row charged when the portal rejects with `reason`. Must not be called with OK.
Invariant invariant_for(Reason reason);

struct Cell {
    std::uint64_t exercised = 0;
    std::uint64_t caught = 0;
    std::uint64_t missed = 0;

    bool operator==(const Cell&) const = default;
};

class AllocationMatrix {
public:
    void exercise(Invariant inv, std::uint64_t n = 1) { at(inv).exercised += n; }
    void catch_violation(Invariant inv, std::uint64_t n = 1) { at(inv).caught += n; }
    void miss_violation(Invariant inv, std::uint64_t n = 1) { at(inv).missed += n; }

    const Cell& cell(Invariant inv, Enforcer e) const {
        return cells_[static_cast<std::size_t>(inv)][static_cast<std::size_t>(e)];
    }
    const Cell& row(Invariant inv) const { return cell(inv, enforcer_of(inv)); }
    std::uint64_t total_missed() const;

    AllocationMatrix& operator+=(const AllocationMatrix& other);
    bool operator==(const AllocationMatrix&) const = default;

private:
    Cell& at(Invariant inv) {
        return cells_[static_cast<std::size_t>(inv)][static_cast<std::size_t>(enforcer_of(inv))];
    }
    std::array<std::array<Cell, 5>, 5> cells_{};
};

enum class ReportFormat { Text, Structured };

std::string emit_allocation_report(const AllocationMatrix& matrix, ReportFormat format);

} // namespace pcimkit::harness
