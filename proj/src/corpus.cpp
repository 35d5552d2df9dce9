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

#include "idiomine/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>
#include <utility>

namespace idiomine {
namespace {

constexpr std::string_view kIdmTag = "<idm> ";

std::int64_t parse_int(std::string_view text, std::string_view what,
                       std::string_view filename, long lineno) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError("malformed " + std::string(what) + " '" +
                         std::string(text) + "'",
                     filename, lineno);
  return value;
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

std::vector<SentencePair> load_parallel_corpus(std::istream& src,
                                               std::istream& tgt,
                                               const LemmaTable& table,
                                               std::string_view src_name,
                                               std::string_view tgt_name) {
  std::vector<SentencePair> corpus;
  std::string src_line;
  std::string tgt_line;
  long lineno = 0;
  while (true) {
    const bool has_src = read_line(src, src_line);
    const bool has_tgt = read_line(tgt, tgt_line);
    if (!has_src && !has_tgt) break;
    ++lineno;
    if (has_src != has_tgt) {
      const std::string_view shorter = has_src ? tgt_name : src_name;
      throw ParseError("source and target line counts differ", shorter,
                       lineno);
    }
    SentencePair pair;
    pair.pair_id = lineno - 1;
    try {
      pair.source = lemmatize_sentence(src_line, table);
    } catch (const EncodingError&) {
      throw EncodingError("invalid UTF-8", src_name, lineno);
    }
    try {
      pair.target = lemmatize_sentence(tgt_line, table);
    } catch (const EncodingError&) {
      throw EncodingError("invalid UTF-8", tgt_name, lineno);
    }
    if (pair.source.empty()) throw ParseError("empty line", src_name, lineno);
    if (pair.target.empty()) throw ParseError("empty line", tgt_name, lineno);
    corpus.push_back(std::move(pair));
  }
  return corpus;
}

ExtractResult extract_idiomatic_pairs(const std::vector<SentencePair>& corpus,
                                      const std::vector<IdiomEntry>& lexicon,
                                      const MatchConfig& config) {
  ExtractResult result;
  for (const SentencePair& pair : corpus) {
    const auto matches = find_matches(pair.source, lexicon, config);
    if (matches.empty()) {
      result.residual.push_back(pair);
      continue;
    }
    // Smallest span wins; find_matches is in ascending idiom_id order, so
    // keeping strict improvements resolves span ties to the lower id.
    const IdiomMatch* best = &matches.front();
    for (const IdiomMatch& match : matches)
      if (match.span() < best->span()) best = &match;
    AnnotatedPair annotated;
    annotated.pair = pair;
    annotated.match = *best;
    annotated.idiom_canonical = lexicon[best->idiom_id].source_canonical;
    annotated.target_equivalent = lexicon[best->idiom_id].target_equivalent;
    result.groups[best->idiom_id].push_back(std::move(annotated));
  }
  return result;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw IntegrityError("uniform_below called with n == 0");
  // Rejects the top non-multiple-of-n slice of the 64-bit range.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

CorpusSplit build_split(const ExtractResult& extracted,
                        std::int64_t test_target, std::uint64_t seed) {
  if (test_target < 0)
    throw ConfigError("test_target must be non-negative, got " +
                      std::to_string(test_target));

  std::int64_t capacity = 0;
  for (const auto& [idiom_id, group] : extracted.groups)
    if (group.size() >= 2) capacity += static_cast<std::int64_t>(group.size()) - 1;
  const std::int64_t goal = std::min(test_target, capacity);

  // Working copies of the eligible groups, in idiom_id order.
  std::vector<std::vector<AnnotatedPair>> remaining;
  for (const auto& [idiom_id, group] : extracted.groups)
    if (group.size() >= 2) remaining.push_back(group);

  CorpusSplit split;
  split.test_target_shortfall = capacity < test_target;
  std::mt19937_64 rng(seed);
  std::int64_t drawn = 0;
  while (drawn < goal) {
    bool progressed = false;
    for (std::vector<AnnotatedPair>& group : remaining) {
      if (drawn == goal) break;
      if (group.size() <= 1) continue;  // keep one occurrence for training
      const std::uint64_t pick = uniform_below(rng, group.size());
      split.test.push_back(std::move(group[pick]));
      group.erase(group.begin() + static_cast<std::ptrdiff_t>(pick));
      ++drawn;
      progressed = true;
    }
    if (!progressed) break;
  }

  for (std::vector<AnnotatedPair>& group : remaining)
    for (AnnotatedPair& pair : group)
      split.train_idiomatic.push_back(std::move(pair));
  for (const auto& [idiom_id, group] : extracted.groups)
    if (group.size() < 2)
      for (const AnnotatedPair& pair : group)
        split.train_idiomatic.push_back(pair);
  split.train_plain = extracted.residual;

  const auto by_pair_id = [](const AnnotatedPair& a, const AnnotatedPair& b) {
    return a.pair.pair_id < b.pair.pair_id;
  };
  std::sort(split.test.begin(), split.test.end(), by_pair_id);
  std::sort(split.train_idiomatic.begin(), split.train_idiomatic.end(),
            by_pair_id);
  std::sort(split.train_plain.begin(), split.train_plain.end(),
            [](const SentencePair& a, const SentencePair& b) {
              return a.pair_id < b.pair_id;
            });
  for (const AnnotatedPair& pair : split.train_idiomatic)
    ++split.idiom_train_freq[pair.match.idiom_id];
  return split;
}

std::string tag_source_line(std::string_view line) {
  std::string out;
  out.reserve(kIdmTag.size() + line.size());
  out += kIdmTag;
  out += line;
  return out;
}

std::string strip_source_tag(std::string_view line) {
  if (line.substr(0, kIdmTag.size()) == kIdmTag)
    line.remove_prefix(kIdmTag.size());
  return std::string(line);
}

TaggedCorpus tag_sources(const CorpusSplit& split) {
  // Merge the two training collections in pair_id order.
  TaggedCorpus out;
  std::size_t p = 0;
  std::size_t i = 0;
  while (p < split.train_plain.size() || i < split.train_idiomatic.size()) {
    const bool take_plain =
        i == split.train_idiomatic.size() ||
        (p < split.train_plain.size() &&
         split.train_plain[p].pair_id <
             split.train_idiomatic[i].pair.pair_id);
    if (take_plain) {
      out.source.push_back(split.train_plain[p].source.raw);
      out.target.push_back(split.train_plain[p].target.raw);
      ++p;
    } else {
      out.source.push_back(tag_source_line(split.train_idiomatic[i].pair.source.raw));
      out.target.push_back(split.train_idiomatic[i].pair.target.raw);
      ++i;
    }
  }
  return out;
}

SplitStats compute_stats(const CorpusSplit& split) {
  SplitStats stats;
  std::set<int> test_idioms;
  for (const AnnotatedPair& pair : split.test)
    test_idioms.insert(pair.match.idiom_id);
  stats.unique_test_idioms = static_cast<std::int64_t>(test_idioms.size());
  stats.train_size = static_cast<std::int64_t>(split.train_plain.size() +
                                               split.train_idiomatic.size());
  stats.idiomatic_train_sentences =
      static_cast<std::int64_t>(split.train_idiomatic.size());
  stats.test_size = static_cast<std::int64_t>(split.test.size());
  return stats;
}

void validate_split(const CorpusSplit& split) {
  std::unordered_set<std::int64_t> seen;
  const auto claim = [&seen](std::int64_t pair_id) {
    if (!seen.insert(pair_id).second)
      throw IntegrityError("pair_id " + std::to_string(pair_id) +
                           " appears in more than one split collection");
  };
  for (const SentencePair& pair : split.train_plain) claim(pair.pair_id);
  for (const AnnotatedPair& pair : split.train_idiomatic)
    claim(pair.pair.pair_id);
  for (const AnnotatedPair& pair : split.test) claim(pair.pair.pair_id);

  std::map<int, std::int64_t> train_freq;
  for (const AnnotatedPair& pair : split.train_idiomatic)
    ++train_freq[pair.match.idiom_id];
  if (train_freq != split.idiom_train_freq)
    throw IntegrityError("idiom_train_freq does not match train_idiomatic");
  for (const AnnotatedPair& pair : split.test) {
    const auto it = split.idiom_train_freq.find(pair.match.idiom_id);
    if (it == split.idiom_train_freq.end() || it->second < 1)
      throw IntegrityError(
          "idiom " + std::to_string(pair.match.idiom_id) +
          " appears in test without a training occurrence");
  }
}

void write_annotations(std::ostream& out,
                       const std::vector<AnnotatedPair>& pairs) {
  for (const AnnotatedPair& pair : pairs) {
    out << pair.pair.pair_id << '\t' << pair.match.idiom_id << '\t'
        << join_words(pair.idiom_canonical) << '\t'
        << join_words(pair.target_equivalent) << '\t'
        << join_ints(pair.match.positions) << '\t'
        << join_ints(pair.match.assignment) << '\n';
  }
}

std::vector<AnnotationRecord> read_annotations(std::istream& in,
                                               std::string_view filename) {
  std::vector<AnnotationRecord> records;
  std::string line;
  long lineno = 0;
  while (read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_on(line, '\t');
    if (fields.size() != 6)
      throw ParseError("expected 6 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       filename, lineno);
    AnnotationRecord record;
    record.pair_id = parse_int(fields[0], "pair_id", filename, lineno);
    record.idiom_id = static_cast<int>(
        parse_int(fields[1], "idiom_id", filename, lineno));
    record.idiom_canonical = std::string(fields[2]);
    record.target_equivalent = std::string(fields[3]);
    if (record.pair_id < 0 || record.idiom_id < 0)
      throw ParseError("negative id", filename, lineno);
    if (record.idiom_canonical.empty() || record.target_equivalent.empty())
      throw ParseError("empty field", filename, lineno);
    for (const std::string_view part : split_on(fields[4], ','))
      record.positions.push_back(static_cast<int>(
          parse_int(part, "match position", filename, lineno)));
    for (const std::string_view part : split_on(fields[5], ','))
      record.assignment.push_back(
          static_cast<int>(parse_int(part, "assignment", filename, lineno)));
    for (std::size_t j = 0; j < record.positions.size(); ++j) {
      if (record.positions[j] < 0)
        throw ParseError("negative match position", filename, lineno);
      if (j > 0 && record.positions[j] <= record.positions[j - 1])
        throw ParseError("match positions not strictly increasing", filename,
                         lineno);
    }
    if (record.assignment.size() != record.positions.size())
      throw ParseError("assignment and positions differ in length", filename,
                       lineno);
    std::vector<bool> used(record.assignment.size(), false);
    for (const int i : record.assignment) {
      if (i < 0 || static_cast<std::size_t>(i) >= used.size() || used[i])
        throw ParseError("assignment is not a permutation", filename, lineno);
      used[i] = true;
    }
    records.push_back(std::move(record));
  }
  return records;
}

void write_manifest(std::ostream& out, const CorpusSplit& split) {
  out << "[TRAIN_PLAIN]\n";
  for (const SentencePair& pair : split.train_plain)
    out << pair.pair_id << '\n';
  out << "[TRAIN_IDIOM]\n";
  for (const AnnotatedPair& pair : split.train_idiomatic)
    out << pair.pair.pair_id << '\n';
  out << "[TEST]\n";
  for (const AnnotatedPair& pair : split.test) out << pair.pair.pair_id << '\n';
}

ManifestData read_manifest(std::istream& in, std::string_view filename) {
  static constexpr std::string_view kHeaders[] = {"[TRAIN_PLAIN]",
                                                  "[TRAIN_IDIOM]", "[TEST]"};
  ManifestData data;
  std::vector<std::int64_t>* sections[] = {&data.train_plain,
                                           &data.train_idiom, &data.test};
  int section = -1;
  std::string line;
  long lineno = 0;
  while (read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (section + 1 >= 3 || line != kHeaders[section + 1])
        throw ParseError("unexpected section header '" + line + "'", filename,
                         lineno);
      ++section;
      continue;
    }
    if (section < 0)
      throw ParseError("pair_id before any section header", filename, lineno);
    sections[section]->push_back(parse_int(line, "pair_id", filename, lineno));
  }
  if (section != 2)
    throw ParseError("manifest is missing sections", filename,
                     lineno == 0 ? 1 : lineno);
  return data;
}

}  // namespace idiomine
