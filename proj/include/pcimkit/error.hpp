#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcimkit {

enum class ErrorCode {
    EncodingOverflow,
    DecodeFailure,
    InvalidHex,
    UnknownDomainTag,
    DuplicateLabel,
    InvalidGuardianSet,
    InsufficientSigners,
    SetMismatch,
    InvalidArgument,
    ReorgIntoFinalized,
    FinalityRegression,
    FinalityBeyondTip,
    DomainMismatch,
    DuplicateRelationId,
    UnknownRelation,
    BatchChainBroken,
    UnknownVk,
    BackendMismatch,
    MalformedProof,
    VkIntegrity,
    DuplicateEntry,
    NotFound,
    WrongSecret,
    AlreadyConsumed,
    NoReceiptKey,
    ScenarioInvalid,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
    explicit Error(ErrorCode code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace pcimkit
