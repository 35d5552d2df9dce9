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

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "idiomine/matcher.hpp"
#include "idiomine/text.hpp"
#include "oracles.hpp"

using namespace idiomine;

namespace {

LemmaTable german_lemmas() {
  LemmaTable table;
  table.insert("steckt", "stecken");
  table.insert("kinderschuhen", "kinderschuh");
  table.insert("alle", "alles");
  table.insert("schließt", "schließen");
  return table;
}

std::vector<IdiomEntry> german_lexicon(const LemmaTable& table) {
  std::istringstream in(
      "alles über einen Kamm scheren\tto measure everything by the same "
      "yardstick\n"
      "in den Kinderschuhen stecken\tto be in the fledgling stage\n"
      "den Kreis schließen\tto bring sth. full circle\n"
      "auf Biegen und Brechen\tby hook or crook\n"
      "Sie haben das Wort\tthe floor is yours\n"
      "eine weiße Weste haben\tto have a clean slate\n");
  return parse_lexicon(in, table, "lexicon.tsv");
}

IdiomEntry make_idiom(int id, const std::vector<std::string>& lemmas) {
  IdiomEntry idiom;
  idiom.id = id;
  idiom.source_canonical = lemmas;
  idiom.source_lemmas = lemmas;
  idiom.target_equivalent = {"x"};
  return idiom;
}

Sentence plain_sentence(const std::string& raw) {
  return lemmatize_sentence(raw, LemmaTable{});
}

}  // namespace

TEST_CASE("find_match locates reordered and inflected idioms") {
  const LemmaTable table = german_lemmas();
  const auto lexicon = german_lexicon(table);
  const MatchConfig config;

  struct Case {
    const char* raw;
    int idiom_id;
    std::vector<int> positions;
    std::vector<int> assignment;
  };
  const Case cases[] = {
      {"Aber man kann eben nicht alle Inseln über einen Kamm scheren.",
       0,
       {5, 7, 8, 9, 10},
       {0, 1, 2, 3, 4}},
      {"Es steckt immer noch in den Kinderschuhen.", 1, {1, 4, 5, 6},
       {3, 0, 1, 2}},
      {"Eine Bemerkung, Gentoo/FreeBSD steckt noch in den Kinderschuhen und "
       "ist kein auf Sicherheit achtendes System.",
       1,
       {6, 8, 9, 10},
       {3, 0, 1, 2}},
      {"Die europäische Krise schließt den Kreis.", 2, {3, 4, 5}, {2, 0, 1}},
      {"Nehmen wir zum Beispiel die Währungsunion: Sie soll auf Biegen und "
       "Brechen eingeführt werden.",
       3,
       {9, 10, 11, 12},
       {0, 1, 2, 3}},
      {"Berichterstatterin. - (FR) Herr Präsident! Danke, dass Sie mir das "
       "Wort erteilt haben.",
       4,
       {12, 14, 15, 17},
       {0, 2, 3, 1}},
      {"Beide haben nicht gerade eine weiße Weste.", 5, {1, 4, 5, 6},
       {3, 0, 1, 2}},
  };
  for (const Case& c : cases) {
    CAPTURE(c.raw);
    const Sentence sentence = lemmatize_sentence(c.raw, table);
    const auto match = find_match(sentence, lexicon[c.idiom_id], config);
    REQUIRE(match.has_value());
    CHECK(match->idiom_id == c.idiom_id);
    CHECK(match->positions == c.positions);
    CHECK(match->assignment == c.assignment);
    validate_match(sentence, lexicon[c.idiom_id], config, *match);
  }

  const Sentence control = lemmatize_sentence(
      "Coca-Cola und Nestlé gehören zu den Unterzeichnern.", table);
  CHECK(find_matches(control, lexicon, config).empty());
}

TEST_CASE("find_matches reports at most one match per idiom, lexicon order") {
  const LemmaTable table = german_lemmas();
  const auto lexicon = german_lexicon(table);
  const Sentence sentence = lemmatize_sentence(
      "Sie haben das Wort und damit schließt sich der Kreis den wir kennen.",
      table);
  const auto matches = find_matches(sentence, lexicon, MatchConfig{});
  REQUIRE(matches.size() == 2);
  CHECK(matches[0].idiom_id == 2);
  CHECK(matches[1].idiom_id == 4);
}

TEST_CASE("gap bound is enforced between consecutive matched positions") {
  const auto idiom = make_idiom(0, {"a", "b"});
  CHECK(find_match(plain_sentence("a x x x b"), idiom, MatchConfig{})
            .has_value());
  CHECK_FALSE(find_match(plain_sentence("a x x x x b"), idiom, MatchConfig{})
                  .has_value());
  CHECK(find_match(plain_sentence("a x x x x b"), idiom,
                   MatchConfig{.max_gap = 4})
            .has_value());
  CHECK_FALSE(find_match(plain_sentence("a x b"), idiom,
                         MatchConfig{.max_gap = 0})
                  .has_value());
  const auto match =
      find_match(plain_sentence("a b"), idiom, MatchConfig{.max_gap = 0});
  REQUIRE(match.has_value());
  CHECK(match->positions == std::vector<int>{0, 1});
}

TEST_CASE("reordering can be disabled") {
  const auto idiom = make_idiom(0, {"a", "b"});
  const Sentence swapped = plain_sentence("b x a");
  const auto with = find_match(swapped, idiom, MatchConfig{});
  REQUIRE(with.has_value());
  CHECK(with->positions == std::vector<int>{0, 2});
  CHECK(with->assignment == std::vector<int>{1, 0});
  CHECK_FALSE(
      find_match(swapped, idiom, MatchConfig{.allow_reorder = false})
          .has_value());
  const auto ordered = find_match(plain_sentence("x a b"), idiom,
                                  MatchConfig{.allow_reorder = false});
  REQUIRE(ordered.has_value());
  CHECK(ordered->assignment == std::vector<int>{0, 1});
}

TEST_CASE("canonical match minimizes span, then first position, then order") {
  const auto ab = make_idiom(0, {"a", "b"});
  CHECK(find_match(plain_sentence("a b a b"), ab, MatchConfig{})->positions ==
        std::vector<int>{0, 1});
  // Reordered "b a" at [2,3] ties the span of [3,4]; the leftmost start wins.
  CHECK(find_match(plain_sentence("a x b a b"), ab, MatchConfig{})->positions ==
        std::vector<int>{2, 3});
  CHECK(find_match(plain_sentence("a x b a b"), ab,
                   MatchConfig{.allow_reorder = false})
            ->positions == std::vector<int>{3, 4});
  CHECK(find_match(plain_sentence("a a b"), ab, MatchConfig{})->positions ==
        std::vector<int>{1, 2});

  const auto abc = make_idiom(0, {"a", "b", "c"});
  CHECK(find_match(plain_sentence("a b b c"), abc, MatchConfig{})->positions ==
        std::vector<int>{0, 1, 3});

  const auto aa = make_idiom(0, {"a", "a"});
  const auto match = find_match(plain_sentence("a a"), aa, MatchConfig{});
  REQUIRE(match.has_value());
  CHECK(match->assignment == std::vector<int>{0, 1});
}

TEST_CASE("duplicate idiom lemmas need matching multiplicity") {
  const auto aab = make_idiom(0, {"a", "a", "b"});
  CHECK_FALSE(find_match(plain_sentence("a b x y"), aab, MatchConfig{})
                  .has_value());
  const auto match = find_match(plain_sentence("a b a"), aab, MatchConfig{});
  REQUIRE(match.has_value());
  CHECK(match->positions == std::vector<int>{0, 1, 2});
  CHECK(match->assignment == std::vector<int>{0, 2, 1});
}

TEST_CASE("negative max_gap is a configuration error") {
  const auto idiom = make_idiom(0, {"a", "b"});
  CHECK_THROWS_AS(
      find_match(plain_sentence("a b"), idiom, MatchConfig{.max_gap = -1}),
      ConfigError);
  CHECK_THROWS_AS(find_matches(plain_sentence("a b"), {idiom},
                               MatchConfig{.max_gap = -2}),
                  ConfigError);
}

TEST_CASE("match_span_text returns the covered surface text") {
  const LemmaTable table = german_lemmas();
  const auto lexicon = german_lexicon(table);
  const Sentence sentence =
      lemmatize_sentence("Es steckt immer noch in den Kinderschuhen.", table);
  const auto match = find_match(sentence, lexicon[1], MatchConfig{});
  REQUIRE(match.has_value());
  CHECK(match_span_text(sentence, *match) ==
        "steckt immer noch in den Kinderschuhen");

  IdiomMatch bogus = *match;
  bogus.positions.back() = 99;
  CHECK_THROWS_AS(match_span_text(sentence, bogus), IntegrityError);
  bogus.positions = {3, 3};
  CHECK_THROWS_AS(match_span_text(sentence, bogus), IntegrityError);
  bogus.positions = {};
  CHECK_THROWS_AS(match_span_text(sentence, bogus), IntegrityError);
}

TEST_CASE("randomized matcher agrees with the exhaustive oracle") {
  std::mt19937_64 rng(20260822);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
  std::uniform_int_distribution<int> length_dist(1, 12);
  std::uniform_int_distribution<int> arity_dist(2, 4);
  std::uniform_int_distribution<int> letter_dist(0, 3);
  std::uniform_int_distribution<int> gap_dist(0, 4);
  std::uniform_int_distribution<int> coin(0, 1);

  for (int trial = 0; trial < 500; ++trial) {
    std::string raw;
    const int n = length_dist(rng);
    for (int i = 0; i < n; ++i) {
      if (i > 0) raw.push_back(' ');
      raw += alphabet[letter_dist(rng)];
    }
    const Sentence sentence = plain_sentence(raw);
    std::vector<std::string> lemmas;
    const int k = arity_dist(rng);
    for (int i = 0; i < k; ++i) lemmas.push_back(alphabet[letter_dist(rng)]);
    const IdiomEntry idiom = make_idiom(7, lemmas);
    const MatchConfig config{.max_gap = gap_dist(rng),
                             .allow_reorder = coin(rng) == 1};
    CAPTURE(raw);
    CAPTURE(join_words(lemmas));
    CAPTURE(config.max_gap);
    CAPTURE(config.allow_reorder);

    const auto expected = oracle::BruteForceMatcher::find(sentence, idiom, config);
    const auto actual = find_match(sentence, idiom, config);
    REQUIRE(expected.has_value() == actual.has_value());
    if (actual) {
      CHECK(actual->positions == expected->positions);
      CHECK(actual->assignment == expected->assignment);
      validate_match(sentence, idiom, config, *actual);
    }
  }
}
