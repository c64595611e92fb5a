#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gridssq {

// Every failure raised by the library carries one of these kinds. The CLI
// maps kinds to process exit codes, which form a stable scripting contract:
//   2  configuration or validation problems (bad flags, inconsistent shapes)
//   3  parse or data problems (malformed files, out-of-range records)
//   4  anything else (internal faults)
enum class ErrorKind {
    // configuration / validation
    ConfigInvalid,
    DuplicateId,
    EmptyInventory,
    NonPositiveImportance,
    DegradationOutOfRange,
    NonPositiveWindow,
    EmptyInput,
    NonPositiveEntry,
    LengthMismatch,
    WeightsNotNormalized,
    NonPositiveEta,
    DimensionMismatch,
    EmptyPopulation,
    CountExceedsDataset,
    SchemaMismatch,
    // parse / data
    ZeroCount,
    SeverityBelowOne,
    TimestampOutOfHorizon,
    UnknownEntity,
    MalformedLine,
    UnknownField,
    ParseError,
    DatasetInvalid,
    EmptyDataset,
    IoError,
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ConfigInvalid:
    case ErrorKind::DuplicateId:
    case ErrorKind::EmptyInventory:
    case ErrorKind::NonPositiveImportance:
    case ErrorKind::DegradationOutOfRange:
    case ErrorKind::NonPositiveWindow:
    case ErrorKind::EmptyInput:
    case ErrorKind::NonPositiveEntry:
    case ErrorKind::LengthMismatch:
    case ErrorKind::WeightsNotNormalized:
    case ErrorKind::NonPositiveEta:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::EmptyPopulation:
    case ErrorKind::CountExceedsDataset:
    case ErrorKind::SchemaMismatch:
        return 2;
    case ErrorKind::ZeroCount:
    case ErrorKind::SeverityBelowOne:
    case ErrorKind::TimestampOutOfHorizon:
    case ErrorKind::UnknownEntity:
    case ErrorKind::MalformedLine:
    case ErrorKind::UnknownField:
    case ErrorKind::ParseError:
    case ErrorKind::DatasetInvalid:
    case ErrorKind::EmptyDataset:
    case ErrorKind::IoError:
        return 3;
    }
    return 4;
}

inline const char* kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::EmptyInventory: return "EmptyInventory";
    case ErrorKind::NonPositiveImportance: return "NonPositiveImportance";
    case ErrorKind::DegradationOutOfRange: return "DegradationOutOfRange";
    case ErrorKind::NonPositiveWindow: return "NonPositiveWindow";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorKind::NonPositiveEta: return "NonPositiveEta";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyPopulation: return "EmptyPopulation";
    case ErrorKind::CountExceedsDataset: return "CountExceedsDataset";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::ZeroCount: return "ZeroCount";
    case ErrorKind::SeverityBelowOne: return "SeverityBelowOne";
    case ErrorKind::TimestampOutOfHorizon: return "TimestampOutOfHorizon";
    case ErrorKind::UnknownEntity: return "UnknownEntity";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DatasetInvalid: return "DatasetInvalid";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + std::move(message)),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gridssq
