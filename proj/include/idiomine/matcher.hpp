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

#ifndef IDIOMINE_MATCHER_HPP_
#define IDIOMINE_MATCHER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "idiomine/text.hpp"

namespace idiomine {

/// Matching parameters. `max_gap` bounds the number of unmatched tokens
/// allowed between two consecutive matched positions; `allow_reorder`
/// permits the idiom lemmas to appear in any order.
struct MatchConfig {
  int max_gap = 3;
  bool allow_reorder = true;
};

/// An occurrence of one idiom in one sentence.
///
/// `positions` are strictly increasing token indices, one per idiom lemma,
/// with at most `max_gap` unmatched tokens between consecutive entries.
/// `assignment[j]` is the idiom lemma index matched at `positions[j]`; it is
/// a permutation of 0..k-1, and the identity when reordering is disabled.
struct IdiomMatch {
  int idiom_id = -1;
  std::vector<int> positions;
  std::vector<int> assignment;

  int span() const { return positions.back() - positions.front(); }

  friend bool operator==(const IdiomMatch&, const IdiomMatch&) = default;
};

/// Finds the canonical occurrence of `idiom` in `sentence`, or nullopt.
///
/// Of all valid occurrences the canonical one has, in order of precedence:
/// smallest span, leftmost first position, lexicographically smallest
/// position vector, lexicographically smallest assignment. Throws
/// ConfigError if config.max_gap is negative.
std::optional<IdiomMatch> find_match(const Sentence& sentence,
                                     const IdiomEntry& idiom,
                                     const MatchConfig& config);

/// Runs find_match for every lexicon entry; the result holds at most one
/// match per idiom, in lexicon order.
std::vector<IdiomMatch> find_matches(const Sentence& sentence,
                                     const std::vector<IdiomEntry>& lexicon,
                                     const MatchConfig& config);

/// Surface text of the matched span (all tokens from the first matched
/// position through the last, space-joined). Throws IntegrityError if the
/// match positions do not fit the sentence.
std::string match_span_text(const Sentence& sentence, const IdiomMatch& match);

/// Checks every IdiomMatch invariant against the sentence and idiom it
/// claims to match; throws IntegrityError naming the first violation.
void validate_match(const Sentence& sentence, const IdiomEntry& idiom,
                    const MatchConfig& config, const IdiomMatch& match);

}  // namespace idiomine

#endif  // IDIOMINE_MATCHER_HPP_
