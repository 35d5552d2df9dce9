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

#include "idiomine/matcher.hpp"

#include <algorithm>
#include <unordered_map>

namespace idiomine {
namespace {

void check_config(const MatchConfig& config) {
  if (config.max_gap < 0)
    throw ConfigError("max_gap must be non-negative, got " +
                      std::to_string(config.max_gap));
}

// Searches one sentence for one idiom. Sentence lemmas are interned once so
// repeated calls against a large lexicon stay cheap.
class MatchFinder {
 public:
  explicit MatchFinder(const Sentence& sentence, const MatchConfig& config)
      : sentence_(sentence), config_(config) {
    for (const std::string& lemma : sentence.lemmas) ++sentence_counts_[lemma];
  }

  std::optional<IdiomMatch> find(const IdiomEntry& idiom) {
    const std::size_t k = idiom.source_lemmas.size();
    // Distinct idiom lemmas with required multiplicities.
    lemma_ids_.clear();
    required_.clear();
    lemma_of_slot_.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      const std::string& lemma = idiom.source_lemmas[i];
      const auto [it, inserted] =
          lemma_ids_.try_emplace(lemma, static_cast<int>(required_.size()));
      if (inserted) required_.push_back(0);
      ++required_[it->second];
      lemma_of_slot_[i] = it->second;
    }
    // Multiset containment pre-check against the whole sentence.
    for (const auto& [lemma, id] : lemma_ids_) {
      const auto it = sentence_counts_.find(lemma);
      if (it == sentence_counts_.end() || it->second < required_[id])
        return std::nullopt;
    }
    // Which distinct idiom lemma (if any) each sentence position carries.
    const int n = static_cast<int>(sentence_.lemmas.size());
    position_lemma_.assign(n, -1);
    for (int p = 0; p < n; ++p) {
      const auto it = lemma_ids_.find(sentence_.lemmas[p]);
      if (it != lemma_ids_.end()) position_lemma_[p] = it->second;
    }

    k_ = static_cast<int>(k);
    best_.reset();
    remaining_ = required_;
    positions_.clear();
    for (int first = 0; first < n; ++first) {
      if (best_ && best_->back() - best_->front() ==
                       k_ - 1)  // no later start can beat a tight span
        break;
      if (!starts_here(first)) continue;
      positions_.push_back(first);
      consume(first);
      extend();
      restore(first);
      positions_.pop_back();
    }
    if (!best_) return std::nullopt;

    IdiomMatch match;
    match.idiom_id = idiom.id;
    match.positions = *best_;
    match.assignment = config_.allow_reorder
                           ? smallest_assignment(idiom, *best_)
                           : identity(k_);
    return match;
  }

 private:
  bool starts_here(int p) const {
    if (config_.allow_reorder) return position_lemma_[p] >= 0;
    return position_lemma_[p] == lemma_of_slot_[0];
  }

  bool slot_accepts(int p, int depth) const {
    const int id = position_lemma_[p];
    if (id < 0) return false;
    if (config_.allow_reorder) return remaining_[id] > 0;
    return id == lemma_of_slot_[depth];
  }

  void consume(int p) { --remaining_[position_lemma_[p]]; }
  void restore(int p) { ++remaining_[position_lemma_[p]]; }

  void extend() {
    const int depth = static_cast<int>(positions_.size());
    if (depth == k_) {
      if (!best_ || better(positions_, *best_)) best_ = positions_;
      return;
    }
    const int n = static_cast<int>(position_lemma_.size());
    const int first = positions_.front();
    const int last = positions_.back();
    const int limit = std::min(n - 1, last + 1 + config_.max_gap);
    for (int q = last + 1; q <= limit; ++q) {
      if (best_ && q - first > *best_->rbegin() - best_->front()) break;
      if (!slot_accepts(q, depth)) continue;
      positions_.push_back(q);
      consume(q);
      extend();
      restore(q);
      positions_.pop_back();
    }
  }

  // Canonical order: span, then first position, then the position vector.
  static bool better(const std::vector<int>& a, const std::vector<int>& b) {
    const int span_a = a.back() - a.front();
    const int span_b = b.back() - b.front();
    if (span_a != span_b) return span_a < span_b;
    if (a.front() != b.front()) return a.front() < b.front();
    return a < b;
  }

  static std::vector<int> identity(int k) {
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) out[i] = i;
    return out;
  }

  // Lexicographically smallest valid assignment: each position takes the
  // lowest unused idiom lemma index with a matching lemma.
  std::vector<int> smallest_assignment(const IdiomEntry& idiom,
                                       const std::vector<int>& positions) const {
    const int k = static_cast<int>(positions.size());
    std::vector<int> assignment(k, -1);
    std::vector<bool> used(k, false);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) {
        if (used[i] ||
            idiom.source_lemmas[i] != sentence_.lemmas[positions[j]])
          continue;
        assignment[j] = i;
        used[i] = true;
        break;
      }
    }
    return assignment;
  }

  const Sentence& sentence_;
  const MatchConfig& config_;
  std::unordered_map<std::string, int> sentence_counts_;
  std::unordered_map<std::string, int> lemma_ids_;
  std::vector<int> required_;
  std::vector<int> remaining_;
  std::vector<int> lemma_of_slot_;
  std::vector<int> position_lemma_;
  std::vector<int> positions_;
  std::optional<std::vector<int>> best_;
  int k_ = 0;
};

}  // namespace

std::optional<IdiomMatch> find_match(const Sentence& sentence,
                                     const IdiomEntry& idiom,
                                     const MatchConfig& config) {
  check_config(config);
  MatchFinder finder(sentence, config);
  return finder.find(idiom);
}

std::vector<IdiomMatch> find_matches(const Sentence& sentence,
                                     const std::vector<IdiomEntry>& lexicon,
                                     const MatchConfig& config) {
  check_config(config);
  MatchFinder finder(sentence, config);
  std::vector<IdiomMatch> matches;
  for (const IdiomEntry& idiom : lexicon) {
    if (auto match = finder.find(idiom)) matches.push_back(std::move(*match));
  }
  return matches;
}

std::string match_span_text(const Sentence& sentence,
                            const IdiomMatch& match) {
  if (match.positions.empty())
    throw IntegrityError("match has no positions");
  const int n = static_cast<int>(sentence.tokens.size());
  int prev = -1;
  for (const int p : match.positions) {
    if (p < 0 || p >= n)
      throw IntegrityError("match position " + std::to_string(p) +
                           " outside sentence of length " + std::to_string(n));
    if (p <= prev) throw IntegrityError("match positions not increasing");
    prev = p;
  }
  std::string out;
  for (int p = match.positions.front(); p <= match.positions.back(); ++p) {
    if (p > match.positions.front()) out.push_back(' ');
    out += sentence.tokens[p].surface;
  }
  return out;
}

void validate_match(const Sentence& sentence, const IdiomEntry& idiom,
                    const MatchConfig& config, const IdiomMatch& match) {
  const std::size_t k = idiom.source_lemmas.size();
  if (match.idiom_id != idiom.id) throw IntegrityError("idiom id mismatch");
  if (match.positions.size() != k)
    throw IntegrityError("match covers " +
                         std::to_string(match.positions.size()) + " of " +
                         std::to_string(k) + " idiom lemmas");
  if (match.assignment.size() != k)
    throw IntegrityError("assignment size mismatch");
  match_span_text(sentence, match);  // range and ordering checks
  for (std::size_t j = 1; j < k; ++j) {
    const int gap = match.positions[j] - match.positions[j - 1] - 1;
    if (gap > config.max_gap)
      throw IntegrityError("gap of " + std::to_string(gap) + " exceeds " +
                           std::to_string(config.max_gap));
  }
  std::vector<bool> used(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    const int i = match.assignment[j];
    if (i < 0 || static_cast<std::size_t>(i) >= k || used[i])
      throw IntegrityError("assignment is not a permutation");
    used[i] = true;
    if (sentence.lemmas[match.positions[j]] != idiom.source_lemmas[i])
      throw IntegrityError("lemma mismatch at position " +
                           std::to_string(match.positions[j]));
    if (!config.allow_reorder && i != static_cast<int>(j))
      throw IntegrityError("reordering disabled but assignment not identity");
  }
}

}  // namespace idiomine
