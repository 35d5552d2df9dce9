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

#include "idiomine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

namespace idiomine {
namespace {

std::vector<std::string> fold_all(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& token : tokens) out.push_back(case_fold(token));
  return out;
}

// N-grams are keyed by their tokens joined with a separator that cannot
// occur inside a token (tokenization strips control characters, and folded
// lexicon entries never contain 0x1F).
std::string ngram_key(const std::vector<std::string>& tokens,
                      std::size_t start, int order) {
  std::string key;
  for (int k = 0; k < order; ++k) {
    if (k > 0) key.push_back('\x1F');
    key += tokens[start + static_cast<std::size_t>(k)];
  }
  return key;
}

std::unordered_map<std::string, std::int64_t> ngram_counts(
    const std::vector<std::string>& tokens, int order) {
  std::unordered_map<std::string, std::int64_t> counts;
  if (static_cast<int>(tokens.size()) < order) return counts;
  for (std::size_t start = 0; start + order <= tokens.size(); ++start)
    ++counts[ngram_key(tokens, start, order)];
  return counts;
}

// Clipped multiset overlap |extracted ∩ reference| over unigrams.
std::int64_t clipped_overlap(const std::vector<std::string>& extracted,
                             const std::vector<std::string>& reference) {
  std::unordered_map<std::string, std::int64_t> available;
  for (const std::string& token : reference) ++available[token];
  std::int64_t hits = 0;
  for (const std::string& token : extracted) {
    const auto it = available.find(token);
    if (it != available.end() && it->second > 0) {
      --it->second;
      ++hits;
    }
  }
  return hits;
}

std::string format6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

}  // namespace

double corpus_bleu(const std::vector<std::vector<std::string>>& hypotheses,
                   const std::vector<std::vector<std::string>>& references,
                   int max_order) {
  if (hypotheses.size() != references.size())
    throw InputError("hypothesis and reference counts differ: " +
                     std::to_string(hypotheses.size()) + " vs " +
                     std::to_string(references.size()));
  if (hypotheses.empty()) throw InputError("cannot score an empty corpus");
  if (max_order < 1)
    throw InputError("max_order must be >= 1, got " +
                     std::to_string(max_order));

  std::vector<std::vector<std::string>> hyps;
  std::vector<std::vector<std::string>> refs;
  hyps.reserve(hypotheses.size());
  refs.reserve(references.size());
  for (const auto& h : hypotheses) hyps.push_back(fold_all(h));
  for (const auto& r : references) refs.push_back(fold_all(r));

  std::int64_t hyp_length = 0;
  std::int64_t ref_length = 0;
  std::vector<std::int64_t> matches(static_cast<std::size_t>(max_order), 0);
  std::vector<std::int64_t> totals(static_cast<std::size_t>(max_order), 0);
  for (std::size_t p = 0; p < hyps.size(); ++p) {
    hyp_length += static_cast<std::int64_t>(hyps[p].size());
    ref_length += static_cast<std::int64_t>(refs[p].size());
    for (int order = 1; order <= max_order; ++order) {
      const auto hyp_counts = ngram_counts(hyps[p], order);
      if (hyp_counts.empty()) continue;
      const auto ref_counts = ngram_counts(refs[p], order);
      for (const auto& [key, count] : hyp_counts) {
        totals[static_cast<std::size_t>(order - 1)] += count;
        const auto it = ref_counts.find(key);
        if (it != ref_counts.end())
          matches[static_cast<std::size_t>(order - 1)] +=
              std::min(count, it->second);
      }
    }
  }

  double log_sum = 0.0;
  int included = 0;
  for (int order = 1; order <= max_order; ++order) {
    const std::int64_t total = totals[static_cast<std::size_t>(order - 1)];
    if (total == 0) continue;  // no n-grams of this order exist corpus-wide
    const std::int64_t match = matches[static_cast<std::size_t>(order - 1)];
    if (match == 0) return 0.0;
    log_sum += std::log(static_cast<double>(match) / static_cast<double>(total));
    ++included;
  }
  if (included == 0) return 0.0;  // every hypothesis is empty

  const double geometric_mean = std::exp(log_sum / included);
  const double brevity =
      hyp_length >= ref_length
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_length) /
                               static_cast<double>(hyp_length));
  return geometric_mean * brevity;
}

std::vector<std::string> extract_idiom_translation(
    const std::vector<std::string>& hypothesis, const IdiomMatch& match,
    const AlignmentLinkSet& links) {
  const std::set<int> sources(match.positions.begin(), match.positions.end());
  std::set<int> targets;
  for (const auto& [s, t] : links.links) {
    if (!sources.count(s)) continue;
    if (t < 0 || static_cast<std::size_t>(t) >= hypothesis.size())
      throw IntegrityError("alignment target index " + std::to_string(t) +
                           " outside hypothesis of length " +
                           std::to_string(hypothesis.size()));
    targets.insert(t);
  }
  std::vector<std::string> out;
  out.reserve(targets.size());
  for (const int t : targets)
    out.push_back(hypothesis[static_cast<std::size_t>(t)]);
  return out;
}

double modified_unigram_precision(const std::vector<std::string>& extracted,
                                  const IdiomReferencePair& refs) {
  if (extracted.empty()) return 0.0;
  const std::vector<std::string> folded = fold_all(extracted);
  const std::int64_t best =
      std::max(clipped_overlap(folded, fold_all(refs.standalone)),
               clipped_overlap(folded, fold_all(refs.in_context)));
  return static_cast<double>(best) / static_cast<double>(folded.size());
}

WiaccBreakdown word_level_idiom_accuracy(
    const std::vector<std::string>& extracted,
    const std::vector<std::string>& gold) {
  if (gold.empty()) throw InputError("gold idiom expression is empty");
  const std::vector<std::string> folded = fold_all(extracted);
  WiaccBreakdown breakdown;
  breakdown.hits = clipped_overlap(folded, fold_all(gold));
  breakdown.extras = static_cast<std::int64_t>(folded.size()) - breakdown.hits;
  breakdown.gold_len = static_cast<std::int64_t>(gold.size());
  breakdown.value = static_cast<double>(breakdown.hits - breakdown.extras) /
                    static_cast<double>(breakdown.gold_len);
  return breakdown;
}

MetricReport score_corpus(
    const std::vector<AnnotatedPair>& test,
    const std::vector<Sentence>& hypotheses,
    const std::vector<AlignmentLinkSet>& hypothesis_links,
    const std::vector<AlignmentLinkSet>& reference_links) {
  if (test.empty()) throw InputError("cannot score an empty test set");
  if (hypotheses.size() != test.size() ||
      hypothesis_links.size() != test.size() ||
      reference_links.size() != test.size())
    throw InputError("test set, hypotheses, and alignments differ in size");

  // Fold in pair_id order regardless of input order.
  std::vector<std::size_t> order(test.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&test](std::size_t a, std::size_t b) {
    return test[a].pair.pair_id < test[b].pair.pair_id;
  });

  MetricReport report;
  std::vector<std::vector<std::string>> hyp_tokens;
  std::vector<std::vector<std::string>> ref_tokens;
  double precision_sum = 0.0;
  double wiacc_sum = 0.0;
  for (const std::size_t i : order) {
    const AnnotatedPair& pair = test[i];
    const int source_len = static_cast<int>(pair.pair.source.size());
    for (const int p : pair.match.positions)
      if (p < 0 || p >= source_len)
        throw IntegrityError(
            "match position " + std::to_string(p) + " outside source of pair " +
            std::to_string(pair.pair.pair_id));

    std::vector<std::string> hyp;
    for (const Token& token : hypotheses[i].tokens) hyp.push_back(token.lower);
    std::vector<std::string> ref;
    for (const Token& token : pair.pair.target.tokens)
      ref.push_back(token.lower);

    const std::vector<std::string> extracted =
        extract_idiom_translation(hyp, pair.match, hypothesis_links[i]);
    IdiomReferencePair refs;
    refs.standalone = pair.target_equivalent;
    refs.in_context =
        extract_idiom_translation(ref, pair.match, reference_links[i]);

    MetricReport::PerPair entry;
    entry.pair_id = pair.pair.pair_id;
    entry.unigram_precision = modified_unigram_precision(extracted, refs);
    entry.wiacc = word_level_idiom_accuracy(
        extracted, refs.in_context.empty() ? refs.standalone : refs.in_context);
    precision_sum += entry.unigram_precision;
    wiacc_sum += entry.wiacc.value;
    report.per_pair.push_back(std::move(entry));

    hyp_tokens.push_back(std::move(hyp));
    ref_tokens.push_back(std::move(ref));
  }

  report.corpus_bleu = corpus_bleu(hyp_tokens, ref_tokens);
  report.mean_unigram_precision =
      precision_sum / static_cast<double>(report.per_pair.size());
  report.mean_wiacc = wiacc_sum / static_cast<double>(report.per_pair.size());
  return report;
}

void write_report(std::ostream& out, const MetricReport& report,
                  bool summary_only) {
  out << "BLEU\t" << format6(report.corpus_bleu) << '\n';
  out << "Unigram Precision\t" << format6(report.mean_unigram_precision)
      << '\n';
  out << "Word-level Accuracy\t" << format6(report.mean_wiacc) << '\n';
  if (summary_only) return;
  for (const MetricReport::PerPair& entry : report.per_pair) {
    out << entry.pair_id << '\t' << format6(entry.unigram_precision) << '\t'
        << entry.wiacc.hits << '\t' << entry.wiacc.extras << '\t'
        << entry.wiacc.gold_len << '\t' << format6(entry.wiacc.value) << '\n';
  }
}

}  // namespace idiomine
