// Copyright 2026 the idiomine authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "idiomine/text.hpp"

#include <istream>
#include <sstream>
#include <utility>

namespace idiomine {
namespace {

[[noreturn]] void bad_utf8(std::size_t offset) {
  throw EncodingError("invalid UTF-8 at byte offset " + std::to_string(offset));
}

bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

char32_t decode_code_point(std::string_view bytes, std::size_t& pos) {
  const std::size_t start = pos;
  const auto byte = [&](std::size_t i) -> unsigned char {
    return static_cast<unsigned char>(bytes[i]);
  };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  if (b0 < 0xC2) bad_utf8(start);  // stray continuation or overlong lead
  if (b0 < 0xE0) {
    if (pos + 1 >= bytes.size() || !is_continuation(byte(pos + 1)))
      bad_utf8(start);
    const char32_t cp = ((b0 & 0x1Fu) << 6) | (byte(pos + 1) & 0x3Fu);
    pos += 2;
    return cp;
  }
  if (b0 < 0xF0) {
    if (pos + 2 >= bytes.size()) bad_utf8(start);
    const unsigned char b1 = byte(pos + 1);
    const unsigned char lo = b0 == 0xE0 ? 0xA0 : 0x80;
    const unsigned char hi = b0 == 0xED ? 0x9F : 0xBF;
    if (b1 < lo || b1 > hi || !is_continuation(byte(pos + 2))) bad_utf8(start);
    const char32_t cp = ((b0 & 0x0Fu) << 12) | ((b1 & 0x3Fu) << 6) |
                        (byte(pos + 2) & 0x3Fu);
    pos += 3;
    return cp;
  }
  if (b0 < 0xF5) {
    if (pos + 3 >= bytes.size()) bad_utf8(start);
    const unsigned char b1 = byte(pos + 1);
    const unsigned char lo = b0 == 0xF0 ? 0x90 : 0x80;
    const unsigned char hi = b0 == 0xF4 ? 0x8F : 0xBF;
    if (b1 < lo || b1 > hi || !is_continuation(byte(pos + 2)) ||
        !is_continuation(byte(pos + 3)))
      bad_utf8(start);
    const char32_t cp = ((b0 & 0x07u) << 18) | ((b1 & 0x3Fu) << 12) |
                        ((byte(pos + 2) & 0x3Fu) << 6) | (byte(pos + 3) & 0x3Fu);
    pos += 4;
    return cp;
  }
  bad_utf8(start);
}

void append_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t fold_code_point(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  // Latin-1 Supplement uppercase, skipping the multiplication sign.
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  // Latin Extended-A comes in interleaved case pairs with two parities.
  if (cp >= 0x0100 && cp <= 0x0137) {
    if (cp == 0x0130) return U'i';  // dotted capital I
    if (cp == 0x0131) return cp;    // dotless small i
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;  // capital Y with diaeresis
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp == 0x017F) return U's';  // long s
  // Greek capitals (0x03A2 is unassigned).
  if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 0x20;
  // Cyrillic capitals.
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  return cp;
}

std::string case_fold(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) append_utf8(fold_code_point(decode_code_point(utf8, pos)), out);
  return out;
}

bool is_space_code_point(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:    // next line
    case 0xA0:    // no-break space
    case 0x1680:  // ogham space mark
    case 0x2028:  // line separator
    case 0x2029:  // paragraph separator
    case 0x202F:  // narrow no-break space
    case 0x205F:  // medium mathematical space
    case 0x3000:  // ideographic space
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_punct_code_point(char32_t cp) {
  if ((cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
      (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E))
    return true;
  switch (cp) {
    case 0x00A1:  // inverted exclamation mark
    case 0x00A7:  // section sign
    case 0x00AB:  // left guillemet
    case 0x00B6:  // pilcrow
    case 0x00B7:  // middle dot
    case 0x00BB:  // right guillemet
    case 0x00BF:  // inverted question mark
      return true;
    default:
      // General Punctuation: dashes, curly quotes, daggers, bullet,
      // ellipsis, per mille, primes, single guillemets.
      return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x2043);
  }
}

std::vector<Token> tokenize(std::string_view raw) {
  std::vector<Token> tokens;
  Token current;
  const auto flush = [&] {
    if (!current.surface.empty()) {
      tokens.push_back(std::move(current));
      current = Token{};
    }
  };
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const char32_t cp = decode_code_point(raw, pos);
    if (is_space_code_point(cp)) {
      flush();
    } else if (is_punct_code_point(cp)) {
      flush();
      Token punct;
      append_utf8(cp, punct.surface);
      append_utf8(fold_code_point(cp), punct.lower);
      tokens.push_back(std::move(punct));
    } else {
      append_utf8(cp, current.surface);
      append_utf8(fold_code_point(cp), current.lower);
    }
  }
  flush();
  return tokens;
}

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i].surface;
  }
  return out;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void LemmaTable::insert(std::string_view surface, std::string_view lemma) {
  entries_[case_fold(surface)] = case_fold(lemma);
}

std::string LemmaTable::lookup(std::string_view folded_surface) const {
  const auto it = entries_.find(std::string(folded_surface));
  return it == entries_.end() ? std::string(folded_surface) : it->second;
}

bool LemmaTable::contains(std::string_view folded_surface) const {
  return entries_.count(std::string(folded_surface)) != 0;
}

namespace {

// Splits a TSV line into exactly two non-empty columns.
std::pair<std::string_view, std::string_view> split_two_columns(
    std::string_view line, std::string_view filename, long lineno) {
  const std::size_t tab = line.find('\t');
  if (tab == std::string_view::npos)
    throw ParseError("expected 2 tab-separated columns, got 1", filename, lineno);
  const std::string_view left = line.substr(0, tab);
  const std::string_view right = line.substr(tab + 1);
  if (right.find('\t') != std::string_view::npos)
    throw ParseError("expected 2 tab-separated columns, got more", filename,
                     lineno);
  if (left.empty() || right.empty())
    throw ParseError("empty column", filename, lineno);
  return {left, right};
}

[[noreturn]] void rethrow_encoding(const std::string_view filename,
                                   long lineno) {
  throw EncodingError("invalid UTF-8", filename, lineno);
}

}  // namespace

LemmaTable load_lemma_table(std::istream& in, std::string_view filename) {
  LemmaTable table;
  std::string line;
  long lineno = 0;
  while (read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto [surface, lemma] = split_two_columns(line, filename, lineno);
    try {
      table.insert(surface, lemma);
    } catch (const EncodingError&) {
      rethrow_encoding(filename, lineno);
    }
  }
  return table;
}

Sentence lemmatize_sentence(std::string_view raw, const LemmaTable& table) {
  Sentence sentence;
  sentence.raw.assign(raw);
  sentence.tokens = tokenize(raw);
  sentence.lemmas.reserve(sentence.tokens.size());
  for (const Token& token : sentence.tokens)
    sentence.lemmas.push_back(table.lookup(token.lower));
  return sentence;
}

std::vector<IdiomEntry> parse_lexicon(std::istream& in, const LemmaTable& table,
                                      std::string_view filename) {
  std::vector<IdiomEntry> entries;
  std::unordered_map<std::string, long> seen;
  std::string line;
  long lineno = 0;
  while (read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto [source, target] = split_two_columns(line, filename, lineno);
    std::vector<Token> source_tokens;
    std::vector<Token> target_tokens;
    try {
      source_tokens = tokenize(source);
      target_tokens = tokenize(target);
    } catch (const EncodingError&) {
      rethrow_encoding(filename, lineno);
    }
    if (source_tokens.empty() || target_tokens.empty())
      throw ParseError("empty column", filename, lineno);
    IdiomEntry entry;
    entry.id = static_cast<int>(entries.size());
    for (const Token& token : source_tokens) {
      entry.source_canonical.push_back(token.lower);
      entry.source_lemmas.push_back(table.lookup(token.lower));
    }
    for (const Token& token : target_tokens)
      entry.target_equivalent.push_back(token.lower);
    if (entry.source_canonical.size() < 2)
      throw IdiomArityError("idiom '" + join_words(entry.source_canonical) +
                                "' has fewer than 2 tokens",
                            filename, lineno);
    const std::string key = join_words(entry.source_canonical);
    if (const auto it = seen.find(key); it != seen.end())
      throw DuplicateIdiomError("duplicate idiom '" + key +
                                    "' (first seen on line " +
                                    std::to_string(it->second) + ")",
                                filename, lineno);
    seen.emplace(key, lineno);
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace idiomine
