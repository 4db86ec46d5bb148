#include "adaedit/error.hpp"

namespace adaedit {

std::string_view reason_name(Reason reason) {
  switch (reason) {
  case Reason::NoChange: return "NoChange";
  case Reason::MalformedDiff: return "MalformedDiff";
  case Reason::NoMatch: return "NoMatch";
  case Reason::AmbiguousMatch: return "AmbiguousMatch";
  case Reason::UnsupportedLanguage: return "UnsupportedLanguage";
  case Reason::DelimiterCollision: return "DelimiterCollision";
  case Reason::CounterUnavailable: return "CounterUnavailable";
  case Reason::Usage: return "Usage";
  }
  return "Unknown";
}

} // namespace adaedit
