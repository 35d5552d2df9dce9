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

#ifndef IDIOMINE_CORPUS_HPP_
#define IDIOMINE_CORPUS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "idiomine/matcher.hpp"
#include "idiomine/text.hpp"

namespace idiomine {

/// One parallel-corpus unit: line `pair_id` (0-based) of the source file
/// paired with the same line of the target file. Both sides non-empty.
struct SentencePair {
  std::int64_t pair_id = -1;
  Sentence source;
  Sentence target;
};

/// A sentence pair annotated with one idiom occurrence. The canonical form
/// and target equivalent are copied from the matched lexicon entry so the
/// annotation is self-contained.
struct AnnotatedPair {
  SentencePair pair;
  IdiomMatch match;
  std::vector<std::string> idiom_canonical;
  std::vector<std::string> target_equivalent;
};

/// Train/test partition of a corpus. No pair_id appears in more than one of
/// the three collections; every idiom_id in `test` keeps at least one
/// occurrence in `train_idiomatic` (idiom_train_freq >= 1).
struct CorpusSplit {
  std::vector<SentencePair> train_plain;
  std::vector<AnnotatedPair> train_idiomatic;
  std::vector<AnnotatedPair> test;
  std::map<int, std::int64_t> idiom_train_freq;
  bool test_target_shortfall = false;
};

/// The four corpus statistics rows.
struct SplitStats {
  std::int64_t unique_test_idioms = 0;
  std::int64_t train_size = 0;
  std::int64_t idiomatic_train_sentences = 0;
  std::int64_t test_size = 0;

  friend bool operator==(const SplitStats&, const SplitStats&) = default;
};

/// Output of extraction: idiomatic pairs grouped by idiom_id plus the
/// residual pairs that matched nothing. Together the groups and the
/// residual partition the input corpus.
struct ExtractResult {
  std::map<int, std::vector<AnnotatedPair>> groups;
  std::vector<SentencePair> residual;
};

/// One line of an annotation file, as written by write_annotations.
struct AnnotationRecord {
  std::int64_t pair_id = -1;
  int idiom_id = -1;
  std::string idiom_canonical;
  std::string target_equivalent;
  std::vector<int> positions;
  std::vector<int> assignment;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) =
      default;
};

/// Training corpus rendered as text lines in pair_id order, idiomatic
/// source lines carrying the `<idm> ` prefix.
struct TaggedCorpus {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

/// Pair ids of a split manifest, one vector per section.
struct ManifestData {
  std::vector<std::int64_t> train_plain;
  std::vector<std::int64_t> train_idiom;
  std::vector<std::int64_t> test;

  friend bool operator==(const ManifestData&, const ManifestData&) = default;
};

/// Reads two line-parallel UTF-8 streams into sentence pairs, lemmatizing
/// both sides with `table`. Throws ParseError on unequal line counts or
/// empty lines, EncodingError on malformed UTF-8.
std::vector<SentencePair> load_parallel_corpus(std::istream& src,
                                               std::istream& tgt,
                                               const LemmaTable& table,
                                               std::string_view src_name = {},
                                               std::string_view tgt_name = {});

/// Partitions the corpus: every pair lands in exactly one idiom group or in
/// the residual. A pair matching several idioms goes to the one with the
/// smallest match span, ties to the lower idiom_id.
ExtractResult extract_idiomatic_pairs(const std::vector<SentencePair>& corpus,
                                      const std::vector<IdiomEntry>& lexicon,
                                      const MatchConfig& config);

/// Draws |test| == min(test_target, sum over eligible groups of (size - 1))
/// test pairs, round-robin over eligible groups (size >= 2) in idiom_id
/// order, uniformly without replacement within a group, skipping groups
/// reduced to one remaining pair. Identical inputs and seed give identical
/// output; an unreachable test_target sets test_target_shortfall instead of
/// failing. Throws ConfigError on negative test_target.
CorpusSplit build_split(const ExtractResult& extracted,
                        std::int64_t test_target, std::uint64_t seed);

/// Renders the training corpus (train_plain + train_idiomatic, pair_id
/// order) as text lines, prefixing idiomatic source lines with `<idm> `.
TaggedCorpus tag_sources(const CorpusSplit& split);

/// Prepends the `<idm> ` marker to one source line.
std::string tag_source_line(std::string_view line);

/// Removes one leading `<idm> ` marker if present; other lines unchanged.
std::string strip_source_tag(std::string_view line);

/// Computes the four statistics rows from a split.
SplitStats compute_stats(const CorpusSplit& split);

/// Checks every CorpusSplit invariant (pair_id disjointness, test idiom
/// coverage, frequency bookkeeping); throws IntegrityError on violation.
void validate_split(const CorpusSplit& split);

/// Writes one tab-separated record per annotated pair: pair_id, idiom_id,
/// idiom_canonical (space-joined), target_equivalent (space-joined),
/// match_positions (comma-joined), assignment (comma-joined).
void write_annotations(std::ostream& out,
                       const std::vector<AnnotatedPair>& pairs);

/// Parses an annotation file, validating field count, integer syntax,
/// strictly increasing positions, and that assignment is a permutation.
/// Throws ParseError with file and line context on any violation.
std::vector<AnnotationRecord> read_annotations(std::istream& in,
                                               std::string_view filename = {});

/// Writes the split manifest: [TRAIN_PLAIN], [TRAIN_IDIOM], [TEST] section
/// headers, each followed by its pair_ids one per line in pair_id order.
void write_manifest(std::ostream& out, const CorpusSplit& split);

/// Parses a manifest written by write_manifest; sections must appear
/// exactly once, in order. Throws ParseError on deviations.
ManifestData read_manifest(std::istream& in, std::string_view filename = {});

/// Unbiased uniform draw from [0, n) via rejection sampling on the raw
/// 64-bit generator output; bit-portable across platforms, unlike
/// std::uniform_int_distribution. Throws IntegrityError when n == 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

}  // namespace idiomine

#endif  // IDIOMINE_CORPUS_HPP_
