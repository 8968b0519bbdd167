#include "docforge/core/error.hpp"

namespace docforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::MalformedTable: return "MalformedTable";
    case ErrorCode::InvalidHeadingLevel: return "InvalidHeadingLevel";
    case ErrorCode::InvalidBlock: return "InvalidBlock";
    case ErrorCode::EmptyLexicon: return "EmptyLexicon";
    case ErrorCode::NoGlyphCoverage: return "NoGlyphCoverage";
    case ErrorCode::TextTooWide: return "TextTooWide";
    case ErrorCode::EmptyPoolForKind: return "EmptyPoolForKind";
    case ErrorCode::LayoutInfeasible: return "LayoutInfeasible";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::NoRecords: return "NoRecords";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::MalformedManifestLine: return "MalformedManifestLine";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EndpointUnreachable: return "EndpointUnreachable";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

}  // namespace docforge
