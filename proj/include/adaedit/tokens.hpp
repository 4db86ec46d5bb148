#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace adaedit {

/// Text to token count. Implementations are immutable after construction and
/// safe to share between threads.
class TokenCounter {
public:
  virtual ~TokenCounter() = default;
  virtual std::size_t count(std::string_view text) const = 0;
  virtual const std::string& name() const = 0;
};

/// Unicode code points (invalid UTF-8 bytes count one each).
class CharCounter final : public TokenCounter {
public:
  std::size_t count(std::string_view text) const override;
  const std::string& name() const override { return name_; }

private:
  std::string name_ = "chars";
};

/// Maximal runs of non-whitespace.
class WhitespaceCounter final : public TokenCounter {
public:
  std::size_t count(std::string_view text) const override;
  const std::string& name() const override { return name_; }

private:
  std::string name_ = "ws";
};

/// Byte-level BPE as used by GPT-2 style tokenizers. The vocabulary file is a
/// tokenizer.json as written by the Hugging Face `tokenizers` library:
///
///   {"model": {"type": "BPE", "vocab": {"<token>": <id>, ...},
///              "merges": ["<left> <right>", ...]}}
///
/// `merges` may also hold two-element arrays. Text is pre-split with the GPT-2
/// pattern, each piece is mapped to byte symbols and merged by rank.
class BpeCounter final : public TokenCounter {
public:
  /// Throws Error(CounterUnavailable) when the file is missing or invalid.
  explicit BpeCounter(const std::string& path);
  ~BpeCounter() override;

  std::size_t count(std::string_view text) const override;
  const std::string& name() const override { return name_; }

  /// Token strings for `text`, for inspection and tests.
  std::vector<std::string> tokenize(std::string_view text) const;

private:
  struct Model;
  std::unique_ptr<const Model> model_;
  std::string name_;
};

/// `chars`, `ws` or `bpe:<path>`. Throws Error(CounterUnavailable) for an
/// unknown spec or an unreadable vocabulary.
std::shared_ptr<const TokenCounter> make_counter(std::string_view spec);

/// ADAEDIT_TOKENIZER when set and non-empty, else "chars".
std::string default_counter_spec();

inline std::size_t count_tokens(std::string_view text, const TokenCounter& counter) { return counter.count(text); }

/// Splits text the way GPT-2's byte-level pre-tokenizer does. Non-ASCII code
/// points are classified with a small table (see tokens.cpp), not full
/// Unicode property data.
std::vector<std::string_view> gpt2_pretokenize(std::string_view text);

} // namespace adaedit
