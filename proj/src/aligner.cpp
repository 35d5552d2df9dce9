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

#include "idiomine/aligner.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace idiomine {
namespace {

void check_config(const AlignerConfig& config) {
  if (config.iterations < 1)
    throw ConfigError("iterations must be >= 1, got " +
                      std::to_string(config.iterations));
  if (!(config.tension > 0.0))
    throw ConfigError("tension must be positive, got " +
                      std::to_string(config.tension));
}

std::vector<std::int32_t> encode(const Sentence& sentence, Vocabulary& vocab) {
  std::vector<std::int32_t> ids;
  ids.reserve(sentence.tokens.size());
  for (const Token& token : sentence.tokens) ids.push_back(vocab.add(token.lower));
  return ids;
}

std::vector<std::int32_t> encode_const(const Sentence& sentence,
                                       const Vocabulary& vocab) {
  std::vector<std::int32_t> ids;
  ids.reserve(sentence.tokens.size());
  for (const Token& token : sentence.tokens)
    ids.push_back(vocab.id_of(token.lower));
  return ids;
}

// Normalized alignment-position weights for target position j (0-based) of
// an n-token target against m real source tokens; index 0 is NULL.
void position_weights(const AlignerConfig& config, int m, int n, int j,
                      std::vector<double>& weights) {
  weights.resize(static_cast<std::size_t>(m) + 1);
  if (!config.use_diagonal_prior) {
    const double uniform = 1.0 / (m + 1);
    for (double& w : weights) w = uniform;
    return;
  }
  weights[0] = std::exp(-config.tension);
  double sum = weights[0];
  for (int i = 1; i <= m; ++i) {
    const double offset = std::abs(static_cast<double>(i) / m -
                                   static_cast<double>(j + 1) / n);
    weights[i] = std::exp(-config.tension * offset);
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;
}

}  // namespace

Vocabulary::Vocabulary() : words_{"<null>", "<unk>"} {
  ids_.emplace(words_[0], kNull);
  ids_.emplace(words_[1], kUnk);
}

std::int32_t Vocabulary::add(std::string_view word) {
  const auto it = ids_.find(std::string(word));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  return id;
}

std::int32_t Vocabulary::id_of(std::string_view word) const {
  const auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::word_of(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= words_.size())
    throw IntegrityError("vocabulary id " + std::to_string(id) +
                         " out of range");
  return words_[static_cast<std::size_t>(id)];
}

double TranslationTable::prob(std::int32_t target, std::int32_t source) const {
  if (source < 0 || static_cast<std::size_t>(source) >= rows.size())
    return kUnknownProb;
  const auto& row = rows[static_cast<std::size_t>(source)];
  const auto it = row.find(target);
  return it == row.end() ? kUnknownProb : it->second;
}

double TranslationTable::max_row_error() const {
  double worst = 0.0;
  for (const auto& row : rows) {
    if (row.empty()) continue;
    double sum = 0.0;
    for (const auto& [target, p] : row) sum += p;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

TranslationTable initial_table(const std::vector<SentencePair>& corpus,
                               const AlignerConfig& config) {
  check_config(config);
  if (corpus.empty()) throw ConfigError("cannot train on an empty corpus");

  TranslationTable table;
  table.config = config;
  std::vector<std::vector<std::int32_t>> src_ids;
  std::vector<std::vector<std::int32_t>> tgt_ids;
  for (const SentencePair& pair : corpus) {
    src_ids.push_back(encode(pair.source, table.source_vocab));
    tgt_ids.push_back(encode(pair.target, table.target_vocab));
  }

  std::vector<std::unordered_set<std::int32_t>> support(
      table.source_vocab.size());
  for (std::size_t p = 0; p < corpus.size(); ++p) {
    for (const std::int32_t f : tgt_ids[p]) {
      support[Vocabulary::kNull].insert(f);
      for (const std::int32_t e : src_ids[p]) support[e].insert(f);
    }
  }
  table.rows.resize(support.size());
  for (std::size_t e = 0; e < support.size(); ++e) {
    if (support[e].empty()) continue;
    const double uniform = 1.0 / static_cast<double>(support[e].size());
    for (const std::int32_t f : support[e]) table.rows[e].emplace(f, uniform);
  }
  return table;
}

ExpectedCounts expected_counts(const TranslationTable& table,
                               const std::vector<SentencePair>& corpus) {
  ExpectedCounts ec;
  ec.counts.resize(table.source_vocab.size());
  ec.source_totals.assign(table.source_vocab.size(), 0.0);
  std::vector<double> weights;
  for (const SentencePair& pair : corpus) {
    const auto src = encode_const(pair.source, table.source_vocab);
    const auto tgt = encode_const(pair.target, table.target_vocab);
    const int m = static_cast<int>(src.size());
    const int n = static_cast<int>(tgt.size());
    for (int j = 0; j < n; ++j) {
      position_weights(table.config, m, n, j, weights);
      const std::int32_t f = tgt[static_cast<std::size_t>(j)];
      double denom = weights[0] * table.prob(f, Vocabulary::kNull);
      for (int i = 1; i <= m; ++i)
        denom += weights[static_cast<std::size_t>(i)] *
                 table.prob(f, src[static_cast<std::size_t>(i - 1)]);
      if (!(denom > 0.0))
        throw IntegrityError("zero likelihood for a target word");
      ec.log_likelihood += std::log(denom);
      for (int i = 0; i <= m; ++i) {
        const std::int32_t e =
            i == 0 ? Vocabulary::kNull : src[static_cast<std::size_t>(i - 1)];
        const double posterior =
            weights[static_cast<std::size_t>(i)] * table.prob(f, e) / denom;
        ec.counts[static_cast<std::size_t>(e)][f] += posterior;
        ec.source_totals[static_cast<std::size_t>(e)] += posterior;
      }
    }
  }
  return ec;
}

TranslationTable train(const std::vector<SentencePair>& corpus,
                       const AlignerConfig& config,
                       std::vector<double>* log_likelihoods) {
  TranslationTable table = initial_table(corpus, config);
  if (log_likelihoods) log_likelihoods->clear();
  for (int iter = 0; iter < config.iterations; ++iter) {
    ExpectedCounts ec = expected_counts(table, corpus);
    if (log_likelihoods) log_likelihoods->push_back(ec.log_likelihood);
    for (std::size_t e = 0; e < ec.counts.size(); ++e) {
      if (ec.counts[e].empty() || !(ec.source_totals[e] > 0.0)) continue;
      auto& row = table.rows[e];
      row.clear();
      for (const auto& [f, count] : ec.counts[e])
        row.emplace(f, count / ec.source_totals[e]);
    }
  }
  return table;
}

AlignmentLinkSet viterbi_align(const TranslationTable& table,
                               const SentencePair& pair) {
  const auto src = encode_const(pair.source, table.source_vocab);
  const auto tgt = encode_const(pair.target, table.target_vocab);
  const int m = static_cast<int>(src.size());
  const int n = static_cast<int>(tgt.size());
  AlignmentLinkSet result;
  result.source_length = m;
  result.target_length = n;
  std::vector<double> weights;
  for (int j = 0; j < n; ++j) {
    position_weights(table.config, m, n, j, weights);
    const std::int32_t f = tgt[static_cast<std::size_t>(j)];
    int best = -1;
    double best_score = -1.0;
    for (int i = 1; i <= m; ++i) {
      const double score = weights[static_cast<std::size_t>(i)] *
                           table.prob(f, src[static_cast<std::size_t>(i - 1)]);
      if (score > best_score) {
        best_score = score;
        best = i - 1;
      }
    }
    const double null_score =
        weights[0] * table.prob(f, Vocabulary::kNull);
    // NULL wins only on a strictly higher score.
    if (best >= 0 && null_score <= best_score) result.links.emplace(best, j);
  }
  return result;
}

AlignmentLinkSet transpose(const AlignmentLinkSet& links) {
  AlignmentLinkSet out;
  out.source_length = links.target_length;
  out.target_length = links.source_length;
  for (const auto& [s, t] : links.links) out.links.emplace(t, s);
  return out;
}

AlignmentLinkSet symmetrize(const AlignmentLinkSet& forward,
                            const AlignmentLinkSet& backward) {
  if (forward.source_length != backward.source_length ||
      forward.target_length != backward.target_length)
    throw IntegrityError("alignment dimensions disagree: " +
                         std::to_string(forward.source_length) + "x" +
                         std::to_string(forward.target_length) + " vs " +
                         std::to_string(backward.source_length) + "x" +
                         std::to_string(backward.target_length));
  AlignmentLinkSet out;
  out.source_length = forward.source_length;
  out.target_length = forward.target_length;
  for (const auto& link : forward.links)
    if (backward.links.count(link)) out.links.insert(link);
  return out;
}

std::vector<AlignmentLinkSet> align_corpus_intersect(
    const std::vector<SentencePair>& corpus, const AlignerConfig& config) {
  std::vector<SentencePair> reversed;
  reversed.reserve(corpus.size());
  for (const SentencePair& pair : corpus)
    reversed.push_back({pair.pair_id, pair.target, pair.source});
  const TranslationTable forward = train(corpus, config);
  const TranslationTable backward = train(reversed, config);
  std::vector<AlignmentLinkSet> result;
  result.reserve(corpus.size());
  for (std::size_t p = 0; p < corpus.size(); ++p) {
    const AlignmentLinkSet fwd = viterbi_align(forward, corpus[p]);
    const AlignmentLinkSet bwd =
        transpose(viterbi_align(backward, reversed[p]));
    result.push_back(symmetrize(fwd, bwd));
  }
  return result;
}

void write_pharaoh(std::ostream& out,
                   const std::vector<AlignmentLinkSet>& alignments) {
  for (const AlignmentLinkSet& alignment : alignments) {
    bool first = true;
    for (const auto& [s, t] : alignment.links) {
      if (!first) out << ' ';
      out << s << '-' << t;
      first = false;
    }
    out << '\n';
  }
}

std::vector<AlignmentLinkSet> read_pharaoh(std::istream& in,
                                           std::string_view filename) {
  std::vector<AlignmentLinkSet> alignments;
  std::string line;
  long lineno = 0;
  while (read_line(in, line)) {
    ++lineno;
    AlignmentLinkSet alignment;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && line[pos] == ' ') ++pos;
      if (pos == line.size()) break;
      const std::size_t end = std::min(line.find(' ', pos), line.size());
      const std::string_view token(line.data() + pos, end - pos);
      const std::size_t dash = token.find('-');
      int s = -1;
      int t = -1;
      const auto parse_part = [&](std::string_view part, int& value) {
        const auto [ptr, ec] =
            std::from_chars(part.data(), part.data() + part.size(), value);
        return ec == std::errc{} && ptr == part.data() + part.size() &&
               value >= 0;
      };
      if (dash == std::string_view::npos ||
          !parse_part(token.substr(0, dash), s) ||
          !parse_part(token.substr(dash + 1), t))
        throw ParseError("malformed alignment link '" + std::string(token) +
                             "'",
                         filename, lineno);
      alignment.links.emplace(s, t);
      alignment.source_length = std::max(alignment.source_length, s + 1);
      alignment.target_length = std::max(alignment.target_length, t + 1);
      pos = end;
    }
    alignments.push_back(std::move(alignment));
  }
  return alignments;
}

}  // namespace idiomine
