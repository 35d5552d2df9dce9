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

#ifndef IDIOMINE_ALIGNER_HPP_
#define IDIOMINE_ALIGNER_HPP_

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "idiomine/corpus.hpp"

namespace idiomine {

/// Word <-> id table with two reserved entries: NULL (the empty source
/// word) and UNK (any word unseen at training time).
class Vocabulary {
 public:
  static constexpr std::int32_t kNull = 0;
  static constexpr std::int32_t kUnk = 1;

  Vocabulary();

  /// Returns the word's id, adding it if new.
  std::int32_t add(std::string_view word);

  /// Returns the word's id, or kUnk when the word was never added.
  std::int32_t id_of(std::string_view word) const;

  const std::string& word_of(std::int32_t id) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

/// EM training knobs. The diagonal prior weights alignment positions by
/// exp(-tension * |i/m - j/n|) (1-based positions; NULL gets the constant
/// weight exp(-tension), as if maximally off-diagonal).
struct AlignerConfig {
  int iterations = 5;
  bool use_diagonal_prior = false;
  double tension = 4.0;
};

/// IBM Model 1 parameters t(target_word | source_word), stored sparsely per
/// source word over its co-occurring target words. Every stored row sums to
/// 1 within 1e-9. Lookups outside the stored support return the reserved
/// unknown-word probability 1e-7.
class TranslationTable {
 public:
  static constexpr double kUnknownProb = 1e-7;

  double prob(std::int32_t target, std::int32_t source) const;

  /// Largest |row sum - 1| over all stored rows (normalization check).
  double max_row_error() const;

  Vocabulary source_vocab;
  Vocabulary target_vocab;
  /// rows[source_id][target_id] = t(target | source); row 0 is NULL.
  std::vector<std::unordered_map<std::int32_t, double>> rows;
  AlignerConfig config;
};

/// Word alignment links for one sentence pair, with the pair's dimensions.
struct AlignmentLinkSet {
  int source_length = 0;
  int target_length = 0;
  std::set<std::pair<int, int>> links;  // (source_index, target_index)

  friend bool operator==(const AlignmentLinkSet&, const AlignmentLinkSet&) =
      default;
};

/// One E-step's sufficient statistics, exposed so tests can compare them
/// against brute-force alignment enumeration.
struct ExpectedCounts {
  /// counts[source_id][target_id] = expected co-occurrence count.
  std::vector<std::unordered_map<std::int32_t, double>> counts;
  std::vector<double> source_totals;
  double log_likelihood = 0.0;
};

/// Uniform-over-support initial table: each source word's row spreads
/// probability evenly over the target words it co-occurs with (the NULL row
/// covers every target word). Throws ConfigError on an empty corpus or an
/// invalid config.
TranslationTable initial_table(const std::vector<SentencePair>& corpus,
                               const AlignerConfig& config);

/// One E-step over the corpus: expected counts under `table` plus the
/// corpus log-likelihood at the table's current parameters. Accumulation
/// order is fixed (corpus order, then target then source position), so
/// results are bit-reproducible.
ExpectedCounts expected_counts(const TranslationTable& table,
                               const std::vector<SentencePair>& corpus);

/// Runs `config.iterations` EM iterations. When `log_likelihoods` is given
/// it receives one entry per iteration (the likelihood before that
/// iteration's M-step); the sequence is non-decreasing within 1e-12
/// relative tolerance. Throws ConfigError on empty corpus, iterations < 1,
/// or tension <= 0.
TranslationTable train(const std::vector<SentencePair>& corpus,
                       const AlignerConfig& config,
                       std::vector<double>* log_likelihoods = nullptr);

/// Links each target position to its argmax source position under the
/// table (and the table's positional weights). A NULL argmax produces no
/// link; a real word beats NULL on ties; ties between real words go to the
/// smallest source index.
AlignmentLinkSet viterbi_align(const TranslationTable& table,
                               const SentencePair& pair);

/// Swaps link direction and dimensions.
AlignmentLinkSet transpose(const AlignmentLinkSet& links);

/// Intersection symmetrization. Throws IntegrityError when the two sets
/// disagree on the pair dimensions.
AlignmentLinkSet symmetrize(const AlignmentLinkSet& forward,
                            const AlignmentLinkSet& backward);

/// Trains both directions on `corpus` and returns the per-pair
/// intersection of the two Viterbi alignments, in corpus order.
std::vector<AlignmentLinkSet> align_corpus_intersect(
    const std::vector<SentencePair>& corpus, const AlignerConfig& config);

/// Writes one Pharaoh line per pair: zero-based `srcIdx-tgtIdx` links,
/// space-separated, sorted by (src, tgt).
void write_pharaoh(std::ostream& out,
                   const std::vector<AlignmentLinkSet>& alignments);

/// Parses Pharaoh lines; dimensions are set to the minimal lengths that fit
/// the links. Throws ParseError on malformed links.
std::vector<AlignmentLinkSet> read_pharaoh(std::istream& in,
                                           std::string_view filename = {});

}  // namespace idiomine

#endif  // IDIOMINE_ALIGNER_HPP_
