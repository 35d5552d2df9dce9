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

#ifndef IDIOMINE_TEXT_HPP_
#define IDIOMINE_TEXT_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "idiomine/error.hpp"

namespace idiomine {

/// One token of a sentence. `surface` is the original byte sequence
/// (non-empty, whitespace-free); `lower` is its case-folded form.
struct Token {
  std::string surface;
  std::string lower;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Surface-form -> lemma lookup with identity fallback: a form that is not
/// in the table is its own lemma. Keys and values are stored case-folded,
/// so every lemma this table produces is case-folded as well.
class LemmaTable {
 public:
  /// Inserts an entry, case-folding both sides. Later inserts of the same
  /// surface override earlier ones.
  void insert(std::string_view surface, std::string_view lemma);

  /// Looks up a case-folded surface form; absent keys map to themselves.
  std::string lookup(std::string_view folded_surface) const;

  std::size_t size() const { return entries_.size(); }
  bool contains(std::string_view folded_surface) const;

 private:
  std::unordered_map<std::string, std::string> entries_;
};

/// A sentence with its parallel token and lemma sequences.
/// |tokens| == |lemmas| and lemmas[i] is the table image of tokens[i].lower.
struct Sentence {
  std::string raw;
  std::vector<Token> tokens;
  std::vector<std::string> lemmas;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
};

/// A dictionary idiom: the case-folded canonical source phrase, its lemmas,
/// and the target-language equivalent. Canonical phrases have >= 2 tokens.
struct IdiomEntry {
  int id = -1;
  std::vector<std::string> source_canonical;
  std::vector<std::string> source_lemmas;
  std::vector<std::string> target_equivalent;
};

// -- unicode helpers ---------------------------------------------------------

/// Decodes the code point starting at bytes[pos] and advances pos past it.
/// Throws EncodingError on malformed UTF-8 (truncation, overlong forms,
/// surrogates, out-of-range values).
char32_t decode_code_point(std::string_view bytes, std::size_t& pos);

void append_utf8(char32_t cp, std::string& out);

/// One-to-one lowercase mapping covering ASCII, Latin-1, Latin Extended-A,
/// Greek, and Cyrillic. Other code points pass through unchanged.
char32_t fold_code_point(char32_t cp);

/// Case-folds a UTF-8 string code point by code point.
std::string case_fold(std::string_view utf8);

bool is_space_code_point(char32_t cp);
bool is_punct_code_point(char32_t cp);

// -- operations --------------------------------------------------------------

/// Splits text on Unicode whitespace and isolates punctuation code points
/// into single-character tokens. Deterministic and locale-free; joining the
/// surfaces with single spaces and re-tokenizing yields the same sequence.
std::vector<Token> tokenize(std::string_view raw);

/// Joins token surfaces with single spaces.
std::string detokenize(const std::vector<Token>& tokens);

/// Reads one line, stripping the trailing LF and at most one trailing CR.
bool read_line(std::istream& in, std::string& line);

/// Loads a two-column TSV stream of `surface TAB lemma` lines. Later
/// duplicate surfaces override earlier ones. Throws ParseError (with the
/// 1-based line number) on malformed lines and EncodingError on bad UTF-8.
LemmaTable load_lemma_table(std::istream& in, std::string_view filename = {});

/// Tokenizes `raw` and lemmatizes each token's case-folded form.
Sentence lemmatize_sentence(std::string_view raw, const LemmaTable& table);

/// Parses a two-column TSV stream of `idiom phrase TAB target equivalent`
/// lines into IdiomEntry values with ids 0..n-1 in line order. Throws
/// ParseError on malformed lines, IdiomArityError on single-token idioms,
/// and DuplicateIdiomError on repeated canonical phrases.
std::vector<IdiomEntry> parse_lexicon(std::istream& in, const LemmaTable& table,
                                      std::string_view filename = {});

/// Space-joins a token sequence (annotation-file field rendering).
std::string join_words(const std::vector<std::string>& words);

}  // namespace idiomine

#endif  // IDIOMINE_TEXT_HPP_
