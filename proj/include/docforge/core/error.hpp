#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace docforge {

enum class ErrorCode {
  // docmodel
  EmptyDocument,
  MalformedTable,
  InvalidHeadingLevel,
  InvalidBlock,
  // synthgen
  EmptyLexicon,
  NoGlyphCoverage,
  TextTooWide,
  EmptyPoolForKind,
  LayoutInfeasible,
  InvalidSpec,
  IoFailure,
  // metrics
  NoRecords,
  // curation
  ZeroDimension,
  InvalidWeights,
  // evalharness
  MalformedManifestLine,
  DuplicateId,
  EndpointUnreachable,
  MalformedResponse,
  // shared
  InvalidConfig,
  PreconditionFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace docforge
