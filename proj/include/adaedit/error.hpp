#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adaedit {

/// Failure reasons shared by every module. The names are stable: they appear
/// in CLI error objects and dataset filter reports.
enum class Reason {
  NoChange,
  MalformedDiff,
  NoMatch,
  AmbiguousMatch,
  UnsupportedLanguage,
  DelimiterCollision,
  CounterUnavailable,
  Usage,
};

std::string_view reason_name(Reason reason);

class Error : public std::runtime_error {
public:
  Error(Reason reason, const std::string& message)
      : std::runtime_error(message), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

private:
  Reason reason_;
};

} // namespace adaedit
