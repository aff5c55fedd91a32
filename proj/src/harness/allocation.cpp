#include "pcimkit/harness/allocation.hpp"

#include <iomanip>
#include <sstream>

namespace pcimkit::harness {

std::string_view to_string(Invariant inv) {
    switch (inv) {
    case Invariant::OriginAuthenticity: return "origin_authenticity";
    case Invariant::ReplaySafety: return "replay_safety";
    case Invariant::FinalityAlignment: return "finality_alignment";
    case Invariant::ParameterBinding: return "parameter_binding";
    case Invariant::PrivateConsumption: return "private_consumption";
    }
    return "unknown";
}

std::string_view to_string(Enforcer e) {
    switch (e) {
    case Enforcer::Attestation: return "attestation";
    case Enforcer::Finality: return "finality";
    case Enforcer::Portal: return "portal";
    case Enforcer::CryptoCorePortal: return "crypto_core+portal";
    case Enforcer::Inbox: return "inbox";
    }
    return "unknown";
}

Enforcer enforcer_of(Invariant inv) {
    switch (inv) {
    case Invariant::OriginAuthenticity: return Enforcer::Attestation;
    case Invariant::ReplaySafety: return Enforcer::Portal;
    case Invariant::FinalityAlignment: return Enforcer::Finality;
    case Invariant::ParameterBinding: return Enforcer::CryptoCorePortal;
    case Invariant::PrivateConsumption: return Enforcer::Inbox;
    }
    return Enforcer::Portal;
}

Invariant invariant_for(Reason reason) {
    switch (reason) {
    case Reason::OriginInvalid: return Invariant::OriginAuthenticity;
    case Reason::ReplayDetected: return Invariant::ReplaySafety;
    case Reason::NotFinal: return Invariant::FinalityAlignment;
    default: return Invariant::ParameterBinding;
    }
}

std::uint64_t AllocationMatrix::total_missed() const {
    std::uint64_t n = 0;
    for (const auto& row : cells_)
        for (const auto& c : row) n += c.missed;
    return n;
}

AllocationMatrix& AllocationMatrix::operator+=(const AllocationMatrix& other) {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        for (std::size_t j = 0; j < cells_[i].size(); ++j) {
            cells_[i][j].exercised += other.cells_[i][j].exercised;
            cells_[i][j].caught += other.cells_[i][j].caught;
            cells_[i][j].missed += other.cells_[i][j].missed;
        }
    }
    return *this;
}

std::string emit_allocation_report(const AllocationMatrix& matrix, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Structured) {
        for (auto inv : kAllInvariants) {
            const Cell& c = matrix.row(inv);
            out << to_string(inv) << ' ' << to_string(enforcer_of(inv)) << ' ' << c.exercised << ' ' << c.caught
                << ' ' << c.missed << '\n';
        }
        return out.str();
    }

    // cells are exercised/caught/missed; '-' marks an unallocated cell
    constexpr int kRowLabel = 21;
    constexpr int kCol = 20;
    out << std::left << std::setw(kRowLabel) << "invariant";
    for (auto e : kAllEnforcers) out << std::setw(kCol) << to_string(e);
    out << '\n';
    for (auto inv : kAllInvariants) {
        out << std::setw(kRowLabel) << to_string(inv);
        for (auto e : kAllEnforcers) {
            std::string text = "-";
            if (enforcer_of(inv) == e) {
                const Cell& c = matrix.cell(inv, e);
                text = std::to_string(c.exercised) + "/" + std::to_string(c.caught) + "/" + std::to_string(c.missed);
            }
            out << std::setw(kCol) << text;
        }
        out << '\n';
    }
    out << "missed total: " << matrix.total_missed() << '\n';
    return out.str();
}

} // namespace pcimkit::harness
