#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "adaedit/error.hpp"
#include "adaedit/lines.hpp"

namespace adaedit {

/// Result of applying any diff. A failure never carries partial text.
struct PatchOutcome {
  std::optional<LineSequence> patched;
  std::optional<Reason> failure;
  /// Tolerance rung used to locate each hunk (content-addressed patching only).
  std::vector<int> tolerance_used;
  /// Index of the hunk that failed, when known.
  std::optional<std::size_t> failed_hunk;
  std::string detail;

  bool ok() const { return patched.has_value(); }

  static PatchOutcome success(LineSequence text, std::vector<int> rungs = {}) {
    PatchOutcome out;
    out.patched = std::move(text);
    out.tolerance_used = std::move(rungs);
    return out;
  }

  static PatchOutcome fail(Reason reason, std::string detail,
                           std::optional<std::size_t> hunk = std::nullopt) {
    PatchOutcome out;
    out.failure = reason;
    out.failed_hunk = hunk;
    out.detail = std::move(detail);
    return out;
  }
};

} // namespace adaedit
