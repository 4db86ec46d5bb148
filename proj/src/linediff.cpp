#include "adaedit/linediff.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>

#include "adaedit/error.hpp"

namespace adaedit {
namespace {

constexpr std::string_view kNoNewlineMarker = "\\ No newline at end of file";

// Maps every line of both sides to a small integer so the diff compares ints.
// The unterminated final line of a text gets an id distinct from the same text
// with a newline.
struct InternedPair {
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> b;
};

InternedPair intern(const LineSequence& source, const LineSequence& target) {
  std::unordered_map<std::string_view, std::uint32_t> terminated;
  std::unordered_map<std::string_view, std::uint32_t> open;
  std::uint32_t next = 0;
  auto id_of = [&](const LineSequence& seq, std::size_t i) {
    auto& table = seq.unterminated(i) ? open : terminated;
    auto [it, inserted] = table.try_emplace(seq.lines[i], next);
    if (inserted) ++next;
    return it->second;
  };
  InternedPair out;
  out.a.reserve(source.size());
  out.b.reserve(target.size());
  for (std::size_t i = 0; i < source.size(); ++i) out.a.push_back(id_of(source, i));
  for (std::size_t i = 0; i < target.size(); ++i) out.b.push_back(id_of(target, i));
  return out;
}

enum class Step : std::uint8_t { Keep, Delete, Insert };

struct Point {
  std::ptrdiff_t x;
  std::ptrdiff_t y;
};

// Linear-space Myers: find the middle snake of the box, recurse on both halves.
class MyersSolver {
public:
  MyersSolver(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) : a_(a), b_(b) {}

  std::vector<Step> solve() {
    std::vector<Step> steps;
    steps.reserve(a_.size() + b_.size());
    const auto n = static_cast<std::ptrdiff_t>(a_.size());
    const auto m = static_cast<std::ptrdiff_t>(b_.size());
    std::vector<Point> path;
    find_path(0, 0, n, m, path);
    if (path.empty()) {
      // Only possible when one side is empty.
      for (std::ptrdiff_t i = 0; i < n; ++i) steps.push_back(Step::Delete);
      for (std::ptrdiff_t j = 0; j < m; ++j) steps.push_back(Step::Insert);
      return steps;
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      auto [x1, y1] = path[i];
      const auto [x2, y2] = path[i + 1];
      walk_diagonal(x1, y1, x2, y2, steps);
      const auto diff = (x2 - x1) - (y2 - y1);
      if (diff == -1) {
        steps.push_back(Step::Insert);
        ++y1;
      } else if (diff == 1) {
        steps.push_back(Step::Delete);
        ++x1;
      }
      walk_diagonal(x1, y1, x2, y2, steps);
    }
    return steps;
  }

private:
  void walk_diagonal(std::ptrdiff_t& x, std::ptrdiff_t& y, std::ptrdiff_t x2, std::ptrdiff_t y2,
                     std::vector<Step>& steps) const {
    while (x < x2 && y < y2 && a_[x] == b_[y]) {
      steps.push_back(Step::Keep);
      ++x;
      ++y;
    }
  }

  void find_path(std::ptrdiff_t left, std::ptrdiff_t top, std::ptrdiff_t right,
                 std::ptrdiff_t bottom, std::vector<Point>& out) const {
    std::optional<std::pair<Point, Point>> snake = midpoint(left, top, right, bottom);
    if (!snake) return;
    const auto [start, finish] = *snake;
    const std::size_t before = out.size();
    find_path(left, top, start.x, start.y, out);
    if (out.size() == before) out.push_back(start);
    std::vector<Point> tail;
    find_path(finish.x, finish.y, right, bottom, tail);
    if (tail.empty()) tail.push_back(finish);
    // Consecutive sub-paths share their junction point.
    auto first = tail.begin();
    if (!out.empty() && out.back().x == first->x && out.back().y == first->y) ++first;
    out.insert(out.end(), first, tail.end());
  }

  std::optional<std::pair<Point, Point>> midpoint(std::ptrdiff_t left, std::ptrdiff_t top,
                                                  std::ptrdiff_t right,
                                                  std::ptrdiff_t bottom) const {
    const std::ptrdiff_t width = right - left;
    const std::ptrdiff_t height = bottom - top;
    const std::ptrdiff_t size = width + height;
    if (size == 0) return std::nullopt;
    const std::ptrdiff_t delta = width - height;
    const std::ptrdiff_t max = (size + 1) / 2;
    const std::ptrdiff_t offset = max + 1;
    std::vector<std::ptrdiff_t> vf(static_cast<std::size_t>(2 * max + 3), 0);
    std::vector<std::ptrdiff_t> vb(static_cast<std::size_t>(2 * max + 3), 0);
    auto F = [&](std::ptrdiff_t k) -> std::ptrdiff_t& { return vf[static_cast<std::size_t>(k + offset)]; };
    auto B = [&](std::ptrdiff_t c) -> std::ptrdiff_t& { return vb[static_cast<std::size_t>(c + offset)]; };
    F(1) = left;
    B(1) = bottom;

    for (std::ptrdiff_t d = 0; d <= max; ++d) {
      // Forward pass.
      for (std::ptrdiff_t k = d; k >= -d; k -= 2) {
        const std::ptrdiff_t c = k - delta;
        std::ptrdiff_t px;
        std::ptrdiff_t x;
        if (k == -d || (k != d && F(k - 1) < F(k + 1))) {
          px = x = F(k + 1);
        } else {
          px = F(k - 1);
          x = px + 1;
        }
        std::ptrdiff_t y = top + (x - left) - k;
        const std::ptrdiff_t py = (d == 0 || x != px) ? y : y - 1;
        while (x < right && y < bottom && a_[x] == b_[y]) {
          ++x;
          ++y;
        }
        F(k) = x;
        if ((delta & 1) != 0 && c >= -(d - 1) && c <= d - 1 && y >= B(c)) {
          return std::make_pair(Point{px, py}, Point{x, y});
        }
      }
      // Backward pass.
      for (std::ptrdiff_t c = d; c >= -d; c -= 2) {
        const std::ptrdiff_t k = c + delta;
        std::ptrdiff_t py;
        std::ptrdiff_t y;
        if (c == -d || (c != d && B(c - 1) > B(c + 1))) {
          py = y = B(c + 1);
        } else {
          py = B(c - 1);
          y = py - 1;
        }
        std::ptrdiff_t x = left + (y - top) + k;
        const std::ptrdiff_t px = (d == 0 || y != py) ? x : x + 1;
        while (x > left && y > top && a_[x - 1] == b_[y - 1]) {
          --x;
          --y;
        }
        B(c) = y;
        if ((delta & 1) == 0 && k >= -d && k <= d && x <= F(k)) {
          return std::make_pair(Point{x, y}, Point{px, py});
        }
      }
    }
    return std::nullopt;
  }

  std::span<const std::uint32_t> a_;
  std::span<const std::uint32_t> b_;
};

void push_line(std::vector<DiffRun>& runs, RunKind kind, const std::string& line) {
  if (runs.empty() || runs.back().kind != kind) runs.push_back(DiffRun{kind, {}});
  runs.back().lines.push_back(line);
}

struct Change {
  std::size_t old_begin;
  std::size_t old_end;
  std::size_t new_begin;
  std::size_t new_end;
};

std::string format_range(std::size_t start, std::size_t count) {
  std::string out = std::to_string(start);
  if (count != 1) {
    out += ',';
    out += std::to_string(count);
  }
  return out;
}

bool parse_number(std::string_view& s, std::size_t& value) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr == begin) return false;
  s.remove_prefix(static_cast<std::size_t>(res.ptr - begin));
  return true;
}

// "-a[,b]" or "+c[,d]"
bool parse_range(std::string_view& s, char sign, std::size_t& start, std::optional<std::size_t>& count) {
  if (s.empty() || s.front() != sign) return false;
  s.remove_prefix(1);
  if (!parse_number(s, start)) return false;
  if (!s.empty() && s.front() == ',') {
    s.remove_prefix(1);
    std::size_t c = 0;
    if (!parse_number(s, c)) return false;
    count = c;
  }
  return true;
}

struct HeaderNumbers {
  std::size_t old_start = 0;
  std::optional<std::size_t> old_count;
  std::size_t new_start = 0;
  std::optional<std::size_t> new_count;
};

std::optional<HeaderNumbers> parse_header(std::string_view line) {
  // "@@ -a,b +c,d @@ optional section text"
  line.remove_prefix(2);
  while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
  HeaderNumbers h;
  if (!parse_range(line, '-', h.old_start, h.old_count)) return std::nullopt;
  while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
  if (!parse_range(line, '+', h.new_start, h.new_count)) return std::nullopt;
  while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
  if (line.substr(0, 2) != "@@") return std::nullopt;
  return h;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (begin < text.size()) {
    const std::size_t nl = text.find('\n', begin);
    if (nl == std::string_view::npos) {
      out.push_back(text.substr(begin));
      break;
    }
    out.push_back(text.substr(begin, nl - begin));
    begin = nl + 1;
  }
  return out;
}

} // namespace

LineDiffScript compute_line_diff(const LineSequence& source, const LineSequence& target) {
  LineDiffScript script;
  script.old_trailing_newline = source.trailing_newline;
  script.new_trailing_newline = target.trailing_newline;

  const InternedPair ids = intern(source, target);
  const std::size_t n = ids.a.size();
  const std::size_t m = ids.b.size();
  std::size_t prefix = 0;
  while (prefix < n && prefix < m && ids.a[prefix] == ids.b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix &&
         ids.a[n - 1 - suffix] == ids.b[m - 1 - suffix]) {
    ++suffix;
  }

  std::span<const std::uint32_t> mid_a(ids.a.data() + prefix, n - prefix - suffix);
  std::span<const std::uint32_t> mid_b(ids.b.data() + prefix, m - prefix - suffix);
  const std::vector<Step> steps = MyersSolver(mid_a, mid_b).solve();

  for (std::size_t i = 0; i < prefix; ++i) push_line(script.runs, RunKind::Keep, source.lines[i]);

  // Reorder every changed region so that deletions precede insertions.
  std::size_t x = prefix;
  std::size_t y = prefix;
  std::size_t s = 0;
  while (s < steps.size()) {
    if (steps[s] == Step::Keep) {
      push_line(script.runs, RunKind::Keep, source.lines[x]);
      ++x;
      ++y;
      ++s;
      continue;
    }
    std::size_t dels = 0;
    std::size_t ins = 0;
    while (s < steps.size() && steps[s] != Step::Keep) {
      if (steps[s] == Step::Delete) ++dels; else ++ins;
      ++s;
    }
    for (std::size_t i = 0; i < dels; ++i) push_line(script.runs, RunKind::Delete, source.lines[x + i]);
    for (std::size_t j = 0; j < ins; ++j) push_line(script.runs, RunKind::Insert, target.lines[y + j]);
    x += dels;
    y += ins;
  }

  for (std::size_t i = n - suffix; i < n; ++i) push_line(script.runs, RunKind::Keep, source.lines[i]);
  return script;
}

std::vector<NumberedHunk> group_hunks(const LineDiffScript& script, std::size_t context) {
  std::vector<std::string> old_lines;
  std::vector<std::string> new_lines;
  std::vector<Change> changes;
  for (const DiffRun& run : script.runs) {
    if (run.kind != RunKind::Keep) {
      if (changes.empty() || changes.back().old_end != old_lines.size() ||
          changes.back().new_end != new_lines.size()) {
        changes.push_back(Change{old_lines.size(), old_lines.size(), new_lines.size(), new_lines.size()});
      }
    }
    for (const std::string& line : run.lines) {
      if (run.kind != RunKind::Insert) old_lines.push_back(line);
      if (run.kind != RunKind::Delete) new_lines.push_back(line);
    }
    if (run.kind == RunKind::Delete) changes.back().old_end = old_lines.size();
    if (run.kind == RunKind::Insert) changes.back().new_end = new_lines.size();
  }

  const std::size_t n = old_lines.size();
  const std::size_t m = new_lines.size();
  auto old_open = [&](std::size_t i) { return !script.old_trailing_newline && i + 1 == n; };
  auto new_open = [&](std::size_t j) { return !script.new_trailing_newline && j + 1 == m; };

  std::vector<NumberedHunk> hunks;
  std::size_t c = 0;
  while (c < changes.size()) {
    std::size_t last = c;
    while (last + 1 < changes.size() &&
           changes[last + 1].old_begin - changes[last].old_end <= 2 * context) {
      ++last;
    }
    const Change& first_change = changes[c];
    const Change& last_change = changes[last];
    const std::size_t lead = std::min(context, first_change.old_begin);
    const std::size_t tail = std::min(context, n - last_change.old_end);

    NumberedHunk hunk;
    const std::size_t old_begin = first_change.old_begin - lead;
    const std::size_t old_end = last_change.old_end + tail;
    const std::size_t new_begin = first_change.new_begin - lead;
    const std::size_t new_end = last_change.new_end + tail;
    hunk.old_count = old_end - old_begin;
    hunk.new_count = new_end - new_begin;
    hunk.old_start = hunk.old_count == 0 ? old_begin : old_begin + 1;
    hunk.new_start = hunk.new_count == 0 ? new_begin : new_begin + 1;

    auto add_context = [&](std::size_t from, std::size_t to, std::size_t new_from) {
      for (std::size_t i = from; i < to; ++i) {
        hunk.body.push_back(BodyLine{BodyKind::Context, old_lines[i], old_open(i) && new_open(new_from + (i - from))});
      }
    };
    add_context(old_begin, first_change.old_begin, new_begin);
    for (std::size_t k = c; k <= last; ++k) {
      const Change& ch = changes[k];
      if (k > c) add_context(changes[k - 1].old_end, ch.old_begin, changes[k - 1].new_end);
      for (std::size_t i = ch.old_begin; i < ch.old_end; ++i) {
        hunk.body.push_back(BodyLine{BodyKind::Deleted, old_lines[i], old_open(i)});
      }
      for (std::size_t j = ch.new_begin; j < ch.new_end; ++j) {
        hunk.body.push_back(BodyLine{BodyKind::Inserted, new_lines[j], new_open(j)});
      }
    }
    add_context(last_change.old_end, old_end, last_change.new_end);
    hunks.push_back(std::move(hunk));
    c = last + 1;
  }
  return hunks;
}

std::string render_unified(std::span<const NumberedHunk> hunks, bool with_line_header) {
  std::string out;
  for (const NumberedHunk& hunk : hunks) {
    if (with_line_header) {
      out += "@@ -" + format_range(hunk.old_start, hunk.old_count) + " +" +
             format_range(hunk.new_start, hunk.new_count) + " @@\n";
    } else {
      out += "@@ .. @@\n";
    }
    for (const BodyLine& line : hunk.body) {
      out += line.kind == BodyKind::Context ? ' ' : line.kind == BodyKind::Deleted ? '-' : '+';
      out += line.text;
      out += '\n';
      if (line.no_newline) {
        out += kNoNewlineMarker;
        out += '\n';
      }
    }
  }
  return out;
}

std::vector<NumberedHunk> parse_unified(std::string_view text) {
  std::vector<std::string_view> lines = split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::vector<NumberedHunk> hunks;
  std::vector<bool> numbered;
  for (std::string_view line : lines) {
    if (line.starts_with("@@")) {
      NumberedHunk hunk;
      if (auto header = parse_header(line)) {
        hunk.old_start = header->old_start;
        hunk.old_count = header->old_count.value_or(1);
        hunk.new_start = header->new_start;
        hunk.new_count = header->new_count.value_or(1);
        numbered.push_back(true);
      } else {
        numbered.push_back(false);
      }
      hunks.push_back(std::move(hunk));
      continue;
    }
    if (hunks.empty()) continue;  // stray leading text, file headers, fences
    if (line.starts_with("```")) break;
    NumberedHunk& hunk = hunks.back();
    if (line.empty()) {
      hunk.body.push_back(BodyLine{BodyKind::Context, std::string{}, false});
      continue;
    }
    switch (line.front()) {
    case ' ': hunk.body.push_back(BodyLine{BodyKind::Context, std::string(line.substr(1)), false}); break;
    case '-': hunk.body.push_back(BodyLine{BodyKind::Deleted, std::string(line.substr(1)), false}); break;
    case '+': hunk.body.push_back(BodyLine{BodyKind::Inserted, std::string(line.substr(1)), false}); break;
    case '\\':
      if (!hunk.body.empty()) hunk.body.back().no_newline = true;
      break;
    default:
      throw Error(Reason::MalformedDiff, "unexpected diff body line: " + std::string(line));
    }
  }
  if (hunks.empty()) throw Error(Reason::MalformedDiff, "no hunk header found");

  for (std::size_t i = 0; i < hunks.size(); ++i) {
    if (numbered[i]) continue;
    NumberedHunk& hunk = hunks[i];
    for (const BodyLine& line : hunk.body) {
      if (line.kind != BodyKind::Inserted) ++hunk.old_count;
      if (line.kind != BodyKind::Deleted) ++hunk.new_count;
    }
  }
  return hunks;
}

PatchOutcome apply_numbered(const LineSequence& source, std::span<const NumberedHunk> hunks) {
  std::vector<const NumberedHunk*> order;
  order.reserve(hunks.size());
  for (const NumberedHunk& h : hunks) order.push_back(&h);
  std::stable_sort(order.begin(), order.end(), [](const NumberedHunk* a, const NumberedHunk* b) {
    return a->old_position() < b->old_position();
  });

  const std::size_t n = source.size();
  std::vector<std::string> out;
  out.reserve(n);
  bool last_open = false;
  std::size_t cursor = 0;
  auto copy_source = [&](std::size_t i) {
    out.push_back(source.lines[i]);
    last_open = source.unterminated(i);
  };

  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const NumberedHunk& hunk = *order[idx];
    if (hunk.old_count > 0 && hunk.old_start == 0) {
      return PatchOutcome::fail(Reason::MalformedDiff, "hunk starts at line 0", idx);
    }
    std::size_t consumed = 0;
    for (const BodyLine& line : hunk.body) {
      if (line.kind != BodyKind::Inserted) ++consumed;
    }
    const std::size_t pos = hunk.old_position();
    if (pos > n || pos + consumed > n) {
      return PatchOutcome::fail(Reason::MalformedDiff,
                                "hunk at line " + std::to_string(hunk.old_start) + " is out of range", idx);
    }
    if (pos < cursor) {
      return PatchOutcome::fail(Reason::MalformedDiff, "overlapping hunks", idx);
    }
    for (; cursor < pos; ++cursor) copy_source(cursor);
    for (const BodyLine& line : hunk.body) {
      switch (line.kind) {
      case BodyKind::Context: copy_source(cursor++); break;
      case BodyKind::Deleted: ++cursor; break;
      case BodyKind::Inserted:
        out.push_back(line.text);
        last_open = line.no_newline;
        break;
      }
    }
  }
  for (; cursor < n; ++cursor) copy_source(cursor);

  const bool trailing = !out.empty() && !last_open;
  return PatchOutcome::success(LineSequence::from_lines(std::move(out), trailing));
}

std::string render_numbered_source(const LineSequence& source) {
  std::string out;
  for (std::size_t i = 0; i < source.size(); ++i) {
    out += std::to_string(i + 1);
    out += ": ";
    out += source.lines[i];
    out += '\n';
  }
  return out;
}

} // namespace adaedit
