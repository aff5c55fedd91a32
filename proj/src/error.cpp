#include "pcimkit/error.hpp"

namespace pcimkit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EncodingOverflow: return "EncodingOverflow";
    case ErrorCode::DecodeFailure: return "DecodeFailure";
    case ErrorCode::InvalidHex: return "InvalidHex";
    case ErrorCode::UnknownDomainTag: return "UnknownDomainTag";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::InvalidGuardianSet: return "InvalidGuardianSet";
    case ErrorCode::InsufficientSigners: return "InsufficientSigners";
    case ErrorCode::SetMismatch: return "SetMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ReorgIntoFinalized: return "ReorgIntoFinalized";
    case ErrorCode::FinalityRegression: return "FinalityRegression";
    case ErrorCode::FinalityBeyondTip: return "FinalityBeyondTip";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::DuplicateRelationId: return "DuplicateRelationId";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::BatchChainBroken: return "BatchChainBroken";
    case ErrorCode::UnknownVk: return "UnknownVk";
    case ErrorCode::BackendMismatch: return "BackendMismatch";
    case ErrorCode::MalformedProof: return "MalformedProof";
    case ErrorCode::VkIntegrity: return "VkIntegrity";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::WrongSecret: return "WrongSecret";
    case ErrorCode::AlreadyConsumed: return "AlreadyConsumed";
    case ErrorCode::NoReceiptKey: return "NoReceiptKey";
    case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
    }
    return "Unknown";
}

} // namespace pcimkit
