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

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "idiomine/corpus.hpp"

using namespace idiomine;

namespace {

std::vector<SentencePair> corpus_from(const std::vector<std::string>& src,
                                      const std::vector<std::string>& tgt,
                                      const LemmaTable& table = LemmaTable{}) {
  std::string src_text;
  std::string tgt_text;
  for (const std::string& line : src) src_text += line + "\n";
  for (const std::string& line : tgt) tgt_text += line + "\n";
  std::istringstream src_in(src_text);
  std::istringstream tgt_in(tgt_text);
  return load_parallel_corpus(src_in, tgt_in, table, "src", "tgt");
}

std::vector<IdiomEntry> lexicon_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return parse_lexicon(in, LemmaTable{}, "lexicon");
}

std::string manifest_text(const CorpusSplit& split) {
  std::ostringstream out;
  write_manifest(out, split);
  return out.str();
}

// 200 idioms x 10 pairs each plus 10,000 residual pairs.
std::vector<SentencePair> synthetic_corpus(int idioms, int per_idiom,
                                           int residual) {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
  for (int i = 0; i < idioms; ++i) {
    for (int k = 0; k < per_idiom; ++k) {
      src.push_back("f" + std::to_string(k) + " idm" + std::to_string(i) +
                    "a idm" + std::to_string(i) + "b g" + std::to_string(k));
      tgt.push_back("t" + std::to_string(k) + " tgt" + std::to_string(i) +
                    "a tgt" + std::to_string(i) + "b u" + std::to_string(k));
    }
  }
  for (int j = 0; j < residual; ++j) {
    src.push_back("res" + std::to_string(j) + " foo bar");
    tgt.push_back("sib" + std::to_string(j) + " oof rab");
  }
  return corpus_from(src, tgt);
}

std::vector<IdiomEntry> synthetic_lexicon(int idioms) {
  std::string tsv;
  for (int i = 0; i < idioms; ++i) {
    tsv += "idm" + std::to_string(i) + "a idm" + std::to_string(i) + "b\ttgt" +
           std::to_string(i) + "a tgt" + std::to_string(i) + "b\n";
  }
  return lexicon_from(tsv);
}

}  // namespace

TEST_CASE("load_parallel_corpus pairs lines and applies lemmas") {
  LemmaTable table;
  table.insert("steckt", "stecken");
  const auto corpus = corpus_from({"Es steckt fest.", "Nur Worte."},
                                  {"It is stuck.", "Only words."}, table);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].pair_id == 0);
  CHECK(corpus[1].pair_id == 1);
  CHECK(corpus[0].source.lemmas ==
        std::vector<std::string>{"es", "stecken", "fest", "."});
  CHECK(corpus[0].target.tokens.size() == 4);
  CHECK(corpus[0].source.raw == "Es steckt fest.");
}

TEST_CASE("load_parallel_corpus rejects ragged or empty input") {
  {
    std::istringstream src("one line\n");
    std::istringstream tgt("first\nsecond\n");
    CHECK_THROWS_AS(
        load_parallel_corpus(src, tgt, LemmaTable{}, "src", "tgt"),
        ParseError);
  }
  {
    std::istringstream src("ok\n\n");
    std::istringstream tgt("ok\nalso ok\n");
    try {
      load_parallel_corpus(src, tgt, LemmaTable{}, "src", "tgt");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number() == 2);
    }
  }
}

TEST_CASE("extract_idiomatic_pairs partitions the corpus") {
  const auto lexicon = lexicon_from("heavy rain\tstarker Regen\n");
  const auto corpus = corpus_from(
      {"clear skies today", "heavy winter rain fell", "sunny again"},
      {"x", "y", "z"});
  const ExtractResult result =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  REQUIRE(result.groups.size() == 1);
  REQUIRE(result.groups.count(0) == 1);
  REQUIRE(result.groups.at(0).size() == 1);
  CHECK(result.groups.at(0)[0].pair.pair_id == 1);
  CHECK(result.groups.at(0)[0].match.positions == std::vector<int>{0, 2});
  CHECK(result.groups.at(0)[0].idiom_canonical ==
        std::vector<std::string>{"heavy", "rain"});
  CHECK(result.groups.at(0)[0].target_equivalent ==
        std::vector<std::string>{"starker", "regen"});
  REQUIRE(result.residual.size() == 2);
  CHECK(result.residual[0].pair_id == 0);
  CHECK(result.residual[1].pair_id == 2);
}

TEST_CASE("multi-idiom pairs go to the smallest span, then lowest id") {
  // Idiom 0 spans 3 tokens ("a ... b"), idiom 1 spans 2 ("c d").
  const auto lexicon = lexicon_from("a b\tp q\nc d\tr s\n");
  const auto corpus = corpus_from({"a x b c d"}, {"t"});
  const ExtractResult by_span =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  REQUIRE(by_span.groups.count(1) == 1);
  CHECK(by_span.groups.size() == 1);

  // Equal spans: both idioms match contiguously; lower id wins.
  const auto corpus2 = corpus_from({"c d a b"}, {"t"});
  const ExtractResult by_id =
      extract_idiomatic_pairs(corpus2, lexicon, MatchConfig{});
  REQUIRE(by_id.groups.count(0) == 1);
  CHECK(by_id.groups.size() == 1);
}

TEST_CASE("build_split on the minimal eligible group") {
  const auto lexicon = lexicon_from("a b\tx y\n");
  const auto corpus = corpus_from({"a b one", "a b two"}, {"t1", "t2"});
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  const CorpusSplit split = build_split(extracted, 1, 42);
  CHECK(split.test.size() == 1);
  CHECK(split.train_idiomatic.size() == 1);
  CHECK(split.train_plain.empty());
  CHECK_FALSE(split.test_target_shortfall);
  CHECK(split.idiom_train_freq.at(0) == 1);
  validate_split(split);
}

TEST_CASE("single-occurrence idioms never reach the test set") {
  const auto lexicon = lexicon_from("a b\tx y\n");
  const auto corpus = corpus_from({"a b once"}, {"t"});
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  const CorpusSplit split = build_split(extracted, 5, 0);
  CHECK(split.test.empty());
  CHECK(split.train_idiomatic.size() == 1);
  CHECK(split.test_target_shortfall);
  validate_split(split);
}

TEST_CASE("round-robin sampling visits groups in idiom_id order") {
  // Group 0 has 3 pairs, group 1 has 2: capacity 2 + 1 = 3. Round one takes
  // one from each; round two can only draw from group 0.
  const auto lexicon = lexicon_from("a b\tx\nc d\ty\n");
  const auto corpus = corpus_from(
      {"a b first", "a b second", "a b third", "c d first", "c d second"},
      {"t0", "t1", "t2", "t3", "t4"});
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  for (const std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const CorpusSplit split = build_split(extracted, 3, seed);
    REQUIRE(split.test.size() == 3);
    std::map<int, int> per_idiom;
    for (const AnnotatedPair& pair : split.test)
      ++per_idiom[pair.match.idiom_id];
    CHECK(per_idiom[0] == 2);
    CHECK(per_idiom[1] == 1);
    CHECK(split.idiom_train_freq.at(0) == 1);
    CHECK(split.idiom_train_freq.at(1) == 1);
    validate_split(split);
  }
}

TEST_CASE("build_split caps the test at one fewer than each group size") {
  const auto lexicon = lexicon_from("a b\tx\n");
  const auto corpus = corpus_from({"a b 1", "a b 2", "a b 3"},
                                  {"t", "t", "t"});
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  const CorpusSplit split = build_split(extracted, 100, 7);
  CHECK(split.test.size() == 2);
  CHECK(split.train_idiomatic.size() == 1);
  CHECK(split.test_target_shortfall);
  validate_split(split);
}

TEST_CASE("build_split output is ordered by pair_id and deterministic") {
  const auto corpus = synthetic_corpus(20, 5, 50);
  const auto lexicon = synthetic_lexicon(20);
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  const CorpusSplit first = build_split(extracted, 40, 123);
  const CorpusSplit second = build_split(extracted, 40, 123);
  CHECK(manifest_text(first) == manifest_text(second));
  const CorpusSplit other_seed = build_split(extracted, 40, 124);
  CHECK(manifest_text(first) != manifest_text(other_seed));

  for (std::size_t i = 1; i < first.test.size(); ++i)
    CHECK(first.test[i - 1].pair.pair_id < first.test[i].pair.pair_id);
  for (std::size_t i = 1; i < first.train_idiomatic.size(); ++i)
    CHECK(first.train_idiomatic[i - 1].pair.pair_id <
          first.train_idiomatic[i].pair.pair_id);
  validate_split(first);
  validate_split(other_seed);
}

TEST_CASE("build_split rejects negative targets") {
  CHECK_THROWS_AS(build_split(ExtractResult{}, -1, 0), ConfigError);
}

TEST_CASE("tag_sources prefixes idiomatic lines in pair_id order") {
  const auto lexicon = lexicon_from("a b\tx\n");
  const auto corpus = corpus_from({"plain zero", "a b one", "plain two"},
                                  {"t0", "t1", "t2"});
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  const CorpusSplit split = build_split(extracted, 0, 0);
  const TaggedCorpus tagged = tag_sources(split);
  REQUIRE(tagged.source.size() == 3);
  CHECK(tagged.source[0] == "plain zero");
  CHECK(tagged.source[1] == "<idm> a b one");
  CHECK(tagged.source[2] == "plain two");
  CHECK(tagged.target ==
        std::vector<std::string>{"t0", "t1", "t2"});

  for (std::size_t i = 0; i < tagged.source.size(); ++i) {
    const std::string original = i == 1 ? "a b one" : tagged.source[i];
    CHECK(strip_source_tag(tagged.source[i]) == original);
  }
  CHECK(strip_source_tag("<idm> <idm> twice") == "<idm> twice");
  CHECK(strip_source_tag("no tag") == "no tag");
}

TEST_CASE("compute_stats mirrors the four statistics rows") {
  CHECK(compute_stats(CorpusSplit{}) == SplitStats{0, 0, 0, 0});

  const auto lexicon = lexicon_from("a b\tx\nc d\ty\n");
  const auto corpus = corpus_from({"a b 1", "a b 2", "a b 3", "c d 1",
                                   "c d 2", "plain 1", "plain 2"},
                                  {"t", "t", "t", "t", "t", "t", "t"});
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  const CorpusSplit split = build_split(extracted, 2, 9);
  const SplitStats stats = compute_stats(split);
  CHECK(stats.unique_test_idioms == 2);
  CHECK(stats.train_size == 5);
  CHECK(stats.idiomatic_train_sentences == 3);
  CHECK(stats.test_size == 2);
}

TEST_CASE("annotations round-trip through their file format") {
  LemmaTable table;
  table.insert("steckt", "stecken");
  table.insert("kinderschuhen", "kinderschuh");
  std::istringstream lex_in(
      "in den Kinderschuhen stecken\tto be in the fledgling stage\n");
  const auto lemma_lexicon = parse_lexicon(lex_in, table, "lexicon");
  const auto corpus =
      corpus_from({"Es steckt immer noch in den Kinderschuhen."},
                  {"It is still in its infancy."}, table);
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lemma_lexicon, MatchConfig{});
  std::ostringstream out;
  write_annotations(out, extracted.groups.at(0));
  CHECK(out.str() ==
        "0\t0\tin den kinderschuhen stecken\tto be in the fledgling "
        "stage\t1,4,5,6\t3,0,1,2\n");

  std::istringstream in(out.str());
  const auto records = read_annotations(in, "ann");
  REQUIRE(records.size() == 1);
  CHECK(records[0].pair_id == 0);
  CHECK(records[0].idiom_id == 0);
  CHECK(records[0].idiom_canonical == "in den kinderschuhen stecken");
  CHECK(records[0].target_equivalent == "to be in the fledgling stage");
  CHECK(records[0].positions == std::vector<int>{1, 4, 5, 6});
  CHECK(records[0].assignment == std::vector<int>{3, 0, 1, 2});
}

TEST_CASE("read_annotations validates structure") {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_annotations(in, "ann");
  };
  CHECK_THROWS_AS(parse("1\t2\tx y\tz\n"), ParseError);  // 4 fields
  CHECK_THROWS_AS(parse("a\t0\tx\ty\t0,1\t0,1\n"), ParseError);  // bad int
  CHECK_THROWS_AS(parse("1\t0\tx\ty\t3,2\t0,1\n"), ParseError);  // not rising
  CHECK_THROWS_AS(parse("1\t0\tx\ty\t2,4\t0,0\n"), ParseError);  // not a perm
  CHECK_THROWS_AS(parse("1\t0\tx\ty\t2,4\t0\n"), ParseError);  // length skew
  CHECK_THROWS_AS(parse("-1\t0\tx\ty\t2,4\t0,1\n"), ParseError);
  CHECK_THROWS_AS(parse("1\t0\t\ty\t2,4\t0,1\n"), ParseError);  // empty field
  try {
    parse("0\t0\tx y\tz w\t0,2\t0,1\nbroken\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_number() == 2);
    CHECK(std::string(e.what()).find("ann:2") != std::string::npos);
  }
}

TEST_CASE("manifests round-trip and validate their sections") {
  const auto lexicon = lexicon_from("a b\tx\n");
  const auto corpus = corpus_from({"plain", "a b 1", "a b 2"},
                                  {"t", "t", "t"});
  const ExtractResult extracted =
      extract_idiomatic_pairs(corpus, lexicon, MatchConfig{});
  const CorpusSplit split = build_split(extracted, 1, 5);
  const std::string text = manifest_text(split);
  std::istringstream in(text);
  const ManifestData data = read_manifest(in, "manifest");
  CHECK(data.train_plain == std::vector<std::int64_t>{0});
  CHECK(data.train_plain.size() + data.train_idiom.size() == 2);
  CHECK(data.test.size() == 1);

  const auto parse = [](const std::string& t) {
    std::istringstream s(t);
    return read_manifest(s, "manifest");
  };
  CHECK_THROWS_AS(parse("[TRAIN_PLAIN]\n1\n"), ParseError);  // missing rest
  CHECK_THROWS_AS(parse("[TEST]\n1\n"), ParseError);         // out of order
  CHECK_THROWS_AS(parse("7\n"), ParseError);  // id before any header
  CHECK_THROWS_AS(
      parse("[TRAIN_PLAIN]\n[TRAIN_IDIOM]\n[TEST]\nnot-a-number\n"),
      ParseError);
  CHECK(parse("[TRAIN_PLAIN]\n[TRAIN_IDIOM]\n[TEST]\n").test.empty());
}

TEST_CASE("uniform_below is unbiased by construction and deterministic") {
  std::mt19937_64 a(7);
  std::mt19937_64 b(7);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = 1 + i % 17;
    const std::uint64_t x = uniform_below(a, n);
    CHECK(x < n);
    CHECK(x == uniform_below(b, n));
  }
  std::mt19937_64 rng(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) seen.insert(uniform_below(rng, 5));
  CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(uniform_below(rng, 0), IntegrityError);
}
