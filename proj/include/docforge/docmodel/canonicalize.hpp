#pragma once

#include <string>
#include <string_view>

namespace docforge::docmodel {

/// Pre-metric normalization, idempotent:
///   ill-formed UTF-8 -> U+FFFD, NFC, CRLF/CR -> LF, trailing whitespace
///   stripped per line, runs of >= 3 blank lines collapsed to one, leading
///   and trailing blank lines removed.
std::string canonicalize(std::string_view text);

}  // namespace docforge::docmodel
