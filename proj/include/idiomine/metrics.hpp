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

#ifndef IDIOMINE_METRICS_HPP_
#define IDIOMINE_METRICS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "idiomine/aligner.hpp"
#include "idiomine/corpus.hpp"

namespace idiomine {

/// Word-level idiom accuracy decomposition: `hits` (H) correctly translated
/// words, `extras` (I) surplus words in the extracted translation, and
/// `gold_len` (N) words in the gold idiom expression.
/// value == (H - I) / N exactly; negative values are reported unclamped.
struct WiaccBreakdown {
  std::int64_t hits = 0;
  std::int64_t extras = 0;
  std::int64_t gold_len = 0;
  double value = 0.0;

  friend bool operator==(const WiaccBreakdown&, const WiaccBreakdown&) =
      default;
};

/// The two references an idiom translation is scored against: the
/// dictionary equivalent on its own, and the reference-sentence tokens
/// aligned to the idiom span (possibly empty).
struct IdiomReferencePair {
  std::vector<std::string> standalone;
  std::vector<std::string> in_context;
};

/// Corpus-level scores plus the per-pair values they average.
struct MetricReport {
  struct PerPair {
    std::int64_t pair_id = -1;
    double unigram_precision = 0.0;
    WiaccBreakdown wiacc;
  };

  double corpus_bleu = 0.0;
  double mean_unigram_precision = 0.0;
  double mean_wiacc = 0.0;
  std::vector<PerPair> per_pair;
};

/// Corpus BLEU: geometric mean of clipped n-gram precisions for
/// n = 1..max_order times the brevity penalty exp(min(0, 1 - r/c)). Orders
/// whose corpus-wide n-gram pool is empty are excluded from the mean; an
/// order with a pool but zero matches makes the score 0. Inputs are
/// case-folded. Throws InputError on an empty corpus or a length mismatch.
double corpus_bleu(const std::vector<std::vector<std::string>>& hypotheses,
                   const std::vector<std::vector<std::string>>& references,
                   int max_order = 4);

/// Hypothesis tokens whose indices are linked to any matched source
/// position, in hypothesis order, each index at most once. Throws
/// IntegrityError when a link's target index falls outside the hypothesis.
std::vector<std::string> extract_idiom_translation(
    const std::vector<std::string>& hypothesis, const IdiomMatch& match,
    const AlignmentLinkSet& links);

/// Clipped unigram precision of `extracted` against each reference
/// separately; returns the larger of the two. Empty extracted → 0.
double modified_unigram_precision(const std::vector<std::string>& extracted,
                                  const IdiomReferencePair& refs);

/// WIAcc = (H - I) / N with H the clipped multiset overlap between
/// `extracted` and `gold`. Throws InputError when gold is empty.
WiaccBreakdown word_level_idiom_accuracy(
    const std::vector<std::string>& extracted,
    const std::vector<std::string>& gold);

/// Scores a test set: per-pair unigram precision and WIAcc via the
/// operations above (gold = the aligned in-context reference translation
/// when non-empty, the standalone equivalent otherwise), corpus BLEU over
/// the full sentences, and arithmetic means, folded in pair_id order. The
/// i-th hypothesis and link sets belong to the i-th test pair. Throws
/// InputError on cardinality mismatches, IntegrityError when a match does
/// not fit its source sentence.
MetricReport score_corpus(const std::vector<AnnotatedPair>& test,
                          const std::vector<Sentence>& hypotheses,
                          const std::vector<AlignmentLinkSet>& hypothesis_links,
                          const std::vector<AlignmentLinkSet>& reference_links);

/// Renders the report: three header lines (metric name, tab, value to six
/// decimals), then per pair: pair_id, precision, H, I, N, wiacc,
/// tab-separated. summary_only suppresses the per-pair lines.
void write_report(std::ostream& out, const MetricReport& report,
                  bool summary_only = false);

}  // namespace idiomine

#endif  // IDIOMINE_METRICS_HPP_
