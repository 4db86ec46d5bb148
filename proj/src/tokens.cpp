#include "adaedit/tokens.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <unordered_map>

#include <json.hpp>

#include "adaedit/error.hpp"

namespace adaedit {
namespace {

struct CodePoint {
  std::uint32_t value;
  std::size_t length;  // bytes consumed
  bool valid;
};

CodePoint decode(std::string_view text, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(text[i]);
  if (b0 < 0x80) return {b0, 1, true};
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1, false};
  }
  if (i + len > text.size()) return {b0, 1, false};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[i + k]);
    if ((b & 0xC0) != 0x80) return {b0, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len, true};
}

enum class Cls { Letter, Number, Space, Other };

bool is_space(std::uint32_t cp) {
  if (cp < 0x80) return cp == ' ' || (cp >= 0x09 && cp <= 0x0D);
  return cp == 0x85 || cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

// ASCII is exact. Above it: a table of the common number, symbol and
// combining-mark blocks; everything else counts as a letter.
Cls classify(const CodePoint& c) {
  const std::uint32_t cp = c.value;
  if (!c.valid) return Cls::Other;
  if (is_space(cp)) return Cls::Space;
  if (cp < 0x80) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return Cls::Letter;
    if (cp >= '0' && cp <= '9') return Cls::Number;
    return Cls::Other;
  }
  if (cp == 0xB2 || cp == 0xB3 || cp == 0xB9 || (cp >= 0xBC && cp <= 0xBE)) return Cls::Number;
  if ((cp >= 0x660 && cp <= 0x669) || (cp >= 0xFF10 && cp <= 0xFF19)) return Cls::Number;
  if (cp < 0xC0) return (cp == 0xAA || cp == 0xB5 || cp == 0xBA) ? Cls::Letter : Cls::Other;
  if (cp == 0xD7 || cp == 0xF7) return Cls::Other;
  if (cp >= 0x300 && cp <= 0x36F) return Cls::Other;
  if (cp >= 0x2000 && cp <= 0x2BFF) return Cls::Other;
  if (cp >= 0x3000 && cp <= 0x303F) return Cls::Other;
  if ((cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20)) return Cls::Other;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return Cls::Other;
  return Cls::Letter;
}

// End of the run of `cls` code points starting at byte `i`.
std::size_t run_end(std::string_view text, std::size_t i, Cls cls) {
  while (i < text.size()) {
    const CodePoint c = decode(text, i);
    if (classify(c) != cls) break;
    i += c.length;
  }
  return i;
}

std::size_t contraction_length(std::string_view rest) {
  for (std::string_view suffix : {"'re", "'ve", "'ll", "'s", "'t", "'m", "'d"}) {
    if (rest.starts_with(suffix)) return suffix.size();
  }
  return 0;
}

// GPT-2's byte to printable code point table.
std::array<std::string, 256> byte_symbols() {
  std::array<std::string, 256> out;
  std::array<bool, 256> direct{};
  for (int b = '!'; b <= '~'; ++b) direct[b] = true;
  for (int b = 0xA1; b <= 0xAC; ++b) direct[b] = true;
  for (int b = 0xAE; b <= 0xFF; ++b) direct[b] = true;
  std::uint32_t extra = 0;
  for (int b = 0; b < 256; ++b) {
    const std::uint32_t cp = direct[b] ? static_cast<std::uint32_t>(b) : 256 + extra++;
    std::string s;
    if (cp < 0x80) {
      s += static_cast<char>(cp);
    } else {
      s += static_cast<char>(0xC0 | (cp >> 6));
      s += static_cast<char>(0x80 | (cp & 0x3F));
    }
    out[b] = std::move(s);
  }
  return out;
}

std::atomic<std::uint64_t> next_model_serial{1};

} // namespace

std::vector<std::string_view> gpt2_pretokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    if (const std::size_t len = contraction_length(text.substr(i)); len != 0) {
      out.push_back(text.substr(i, len));
      i += len;
      continue;
    }
    const CodePoint c = decode(text, i);
    std::size_t j = i;
    Cls cls = classify(c);
    if (c.value == ' ' && c.valid && i + 1 < text.size()) {
      const Cls next = classify(decode(text, i + 1));
      if (next != Cls::Space) {
        j = i + 1;
        cls = next;
      }
    }
    if (cls != Cls::Space) {
      i = run_end(text, j, cls);
    } else {
      const std::size_t end = run_end(text, i, Cls::Space);
      // `\s+(?!\S)` leaves the last whitespace character for the next piece
      // when a non-space follows; a single character falls through to `\s+`.
      std::size_t last = i;
      for (std::size_t k = i; k < end; k += decode(text, k).length) last = k;
      i = (end == text.size() || last == start) ? end : last;
    }
    out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::size_t CharCounter::count(std::string_view text) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); i += decode(text, i).length) ++n;
  return n;
}

std::size_t WhitespaceCounter::count(std::string_view text) const {
  std::size_t n = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < text.size();) {
    const CodePoint c = decode(text, i);
    const bool space = c.valid && is_space(c.value);
    if (!space && !in_word) ++n;
    in_word = !space;
    i += c.length;
  }
  return n;
}

struct BpeCounter::Model {
  std::uint64_t serial = 0;
  std::array<std::string, 256> symbols;
  std::array<std::int64_t, 256> byte_ids{};
  std::unordered_map<std::string, std::int64_t> vocab;
  struct Merge {
    std::size_t rank;
    std::int64_t merged;
  };
  std::unordered_map<std::uint64_t, Merge> merges;
  std::vector<std::string> id_to_token;

  static std::uint64_t key(std::int64_t a, std::int64_t b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  std::vector<std::int64_t> encode_piece(std::string_view piece) const {
    std::vector<std::int64_t> syms;
    syms.reserve(piece.size());
    for (char ch : piece) syms.push_back(byte_ids[static_cast<unsigned char>(ch)]);
    while (syms.size() > 1) {
      std::size_t best_rank = std::numeric_limits<std::size_t>::max();
      std::int64_t left = 0;
      std::int64_t right = 0;
      std::int64_t merged = 0;
      for (std::size_t k = 0; k + 1 < syms.size(); ++k) {
        if (syms[k] < 0 || syms[k + 1] < 0) continue;
        const auto it = merges.find(key(syms[k], syms[k + 1]));
        if (it != merges.end() && it->second.rank < best_rank) {
          best_rank = it->second.rank;
          left = syms[k];
          right = syms[k + 1];
          merged = it->second.merged;
        }
      }
      if (best_rank == std::numeric_limits<std::size_t>::max()) break;
      std::vector<std::int64_t> next;
      next.reserve(syms.size());
      for (std::size_t k = 0; k < syms.size();) {
        if (k + 1 < syms.size() && syms[k] == left && syms[k + 1] == right) {
          next.push_back(merged);
          k += 2;
        } else {
          next.push_back(syms[k++]);
        }
      }
      syms = std::move(next);
    }
    return syms;
  }
};

BpeCounter::BpeCounter(const std::string& path) : name_("bpe:" + path) {
  std::ifstream in(path);
  if (!in) throw Error(Reason::CounterUnavailable, "cannot read tokenizer file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Reason::CounterUnavailable, "tokenizer file '" + path + "' is not valid JSON: " + e.what());
  }
  const nlohmann::json* model_json = doc.contains("model") ? &doc["model"] : &doc;
  if (!model_json->is_object() || !model_json->contains("vocab") || !model_json->contains("merges") ||
      !(*model_json)["vocab"].is_object() || !(*model_json)["merges"].is_array()) {
    throw Error(Reason::CounterUnavailable, "tokenizer file '" + path + "' has no BPE vocab/merges");
  }
  if (model_json->contains("type") && (*model_json)["type"] != "BPE") {
    throw Error(Reason::CounterUnavailable, "tokenizer file '" + path + "' is not a BPE model");
  }

  auto model = std::make_unique<Model>();
  model->serial = next_model_serial.fetch_add(1);
  model->symbols = byte_symbols();
  for (const auto& [token, id] : (*model_json)["vocab"].items()) {
    if (!id.is_number_integer()) throw Error(Reason::CounterUnavailable, "non-integer id in vocab");
    model->vocab.emplace(token, id.get<std::int64_t>());
  }
  for (int b = 0; b < 256; ++b) {
    const auto it = model->vocab.find(model->symbols[b]);
    // Bytes missing from the vocabulary stay as single, unmergeable symbols.
    model->byte_ids[b] = it != model->vocab.end() ? it->second : -1 - b;
  }
  std::size_t rank = 0;
  for (const auto& merge : (*model_json)["merges"]) {
    std::string left;
    std::string right;
    if (merge.is_string()) {
      const std::string text = merge.get<std::string>();
      const std::size_t space = text.find(' ');
      if (space == std::string::npos) throw Error(Reason::CounterUnavailable, "bad merge rule '" + text + "'");
      left = text.substr(0, space);
      right = text.substr(space + 1);
    } else if (merge.is_array() && merge.size() == 2) {
      left = merge[0].get<std::string>();
      right = merge[1].get<std::string>();
    } else {
      throw Error(Reason::CounterUnavailable, "bad merge rule in '" + path + "'");
    }
    const auto l = model->vocab.find(left);
    const auto r = model->vocab.find(right);
    const auto m = model->vocab.find(left + right);
    if (l != model->vocab.end() && r != model->vocab.end() && m != model->vocab.end()) {
      model->merges.try_emplace(Model::key(l->second, r->second), Model::Merge{rank, m->second});
    }
    ++rank;
  }
  std::int64_t max_id = -1;
  for (const auto& [token, id] : model->vocab) max_id = std::max(max_id, id);
  model->id_to_token.resize(static_cast<std::size_t>(max_id + 1));
  for (const auto& [token, id] : model->vocab) {
    if (id >= 0) model->id_to_token[static_cast<std::size_t>(id)] = token;
  }
  model_ = std::move(model);
}

BpeCounter::~BpeCounter() = default;

std::size_t BpeCounter::count(std::string_view text) const {
  // Code repeats the same pieces constantly; a per-thread cache keeps the
  // counter itself immutable.
  struct Cache {
    std::uint64_t serial = 0;
    std::unordered_map<std::string, std::size_t> counts;
  };
  thread_local Cache cache;
  if (cache.serial != model_->serial) {
    cache.serial = model_->serial;
    cache.counts.clear();
  }
  std::size_t n = 0;
  for (std::string_view piece : gpt2_pretokenize(text)) {
    const std::string key(piece);
    const auto it = cache.counts.find(key);
    if (it != cache.counts.end()) {
      n += it->second;
      continue;
    }
    const std::size_t c = model_->encode_piece(piece).size();
    if (cache.counts.size() > 200000) cache.counts.clear();
    cache.counts.emplace(key, c);
    n += c;
  }
  return n;
}

std::vector<std::string> BpeCounter::tokenize(std::string_view text) const {
  std::vector<std::string> out;
  for (std::string_view piece : gpt2_pretokenize(text)) {
    for (std::int64_t id : model_->encode_piece(piece)) {
      if (id >= 0) {
        out.push_back(model_->id_to_token[static_cast<std::size_t>(id)]);
      } else {
        out.push_back(model_->symbols[static_cast<std::size_t>(-1 - id)]);
      }
    }
  }
  return out;
}

std::shared_ptr<const TokenCounter> make_counter(std::string_view spec) {
  if (spec == "chars") return std::make_shared<CharCounter>();
  if (spec == "ws") return std::make_shared<WhitespaceCounter>();
  if (spec.starts_with("bpe:") && spec.size() > 4) return std::make_shared<BpeCounter>(std::string(spec.substr(4)));
  throw Error(Reason::CounterUnavailable, "unknown tokenizer '" + std::string(spec) + "' (expected chars, ws or bpe:<file>)");
}

std::string default_counter_spec() {
  const char* env = std::getenv("ADAEDIT_TOKENIZER");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string("chars");
}

} // namespace adaedit
