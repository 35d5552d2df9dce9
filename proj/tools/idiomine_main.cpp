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
//
// idiomine: idiom-aware corpus construction and MT evaluation in six
// subcommands. extract annotates idiom occurrences, split builds the
// train/test partition, tag prepends <idm> to idiomatic training sources,
// stats prints the corpus statistics table, align trains IBM Model 1
// alignments, and score evaluates hypothesis translations.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idiomine/aligner.hpp"
#include "idiomine/corpus.hpp"
#include "idiomine/error.hpp"
#include "idiomine/matcher.hpp"
#include "idiomine/metrics.hpp"
#include "idiomine/text.hpp"

namespace {

using namespace idiomine;

struct Options {
  std::string src;
  std::string tgt;
  std::string lexicon;
  std::string lemmas;
  std::string annotations;
  std::string manifest;
  std::string out;
  std::string hypotheses;
  int max_gap = 3;
  bool no_reorder = false;
  std::uint64_t seed = 0;
  std::int64_t test_size = 0;
  int iters = 5;
  bool diagonal = false;
  double tension = 4.0;
  bool summary_only = false;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path + " for writing");
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> lines;
  std::string line;
  while (read_line(in, line)) lines.push_back(line);
  return lines;
}

LemmaTable load_lemmas(const std::string& path) {
  if (path.empty()) return LemmaTable{};
  std::ifstream in = open_input(path);
  return load_lemma_table(in, path);
}

std::vector<SentencePair> load_corpus(const Options& opt,
                                      const LemmaTable& table) {
  std::ifstream src = open_input(opt.src);
  std::ifstream tgt = open_input(opt.tgt);
  return load_parallel_corpus(src, tgt, table, opt.src, opt.tgt);
}

ExtractResult run_extraction(const Options& opt, const LemmaTable& table) {
  std::ifstream lex_in = open_input(opt.lexicon);
  const std::vector<IdiomEntry> lexicon =
      parse_lexicon(lex_in, table, opt.lexicon);
  const std::vector<SentencePair> corpus = load_corpus(opt, table);
  MatchConfig config;
  config.max_gap = opt.max_gap;
  config.allow_reorder = !opt.no_reorder;
  return extract_idiomatic_pairs(corpus, lexicon, config);
}

std::vector<AnnotatedPair> flatten_groups(const ExtractResult& extracted) {
  std::vector<AnnotatedPair> annotated;
  for (const auto& [idiom_id, group] : extracted.groups)
    annotated.insert(annotated.end(), group.begin(), group.end());
  std::sort(annotated.begin(), annotated.end(),
            [](const AnnotatedPair& a, const AnnotatedPair& b) {
              return a.pair.pair_id < b.pair.pair_id;
            });
  return annotated;
}

void run_extract(const Options& opt) {
  const LemmaTable table = load_lemmas(opt.lemmas);
  const ExtractResult extracted = run_extraction(opt, table);

  std::ofstream ann_out = open_output(opt.annotations);
  write_annotations(ann_out, flatten_groups(extracted));

  std::ofstream res_out = open_output(opt.out);
  for (const SentencePair& pair : extracted.residual)
    res_out << pair.pair_id << '\n';
}

void run_split(const Options& opt) {
  const LemmaTable table = load_lemmas(opt.lemmas);
  const ExtractResult extracted = run_extraction(opt, table);
  const CorpusSplit split = build_split(extracted, opt.test_size, opt.seed);
  validate_split(split);
  if (split.test_target_shortfall)
    std::cerr << "warning: only " << split.test.size()
              << " test pairs are drawable; requested " << opt.test_size
              << '\n';

  std::ofstream manifest_out = open_output(opt.manifest);
  write_manifest(manifest_out, split);

  std::ofstream train_out = open_output(opt.annotations + ".train");
  write_annotations(train_out, split.train_idiomatic);
  std::ofstream test_out = open_output(opt.annotations + ".test");
  write_annotations(test_out, split.test);

  if (!opt.out.empty()) {
    std::ofstream src_out = open_output(opt.out + ".test.src");
    std::ofstream tgt_out = open_output(opt.out + ".test.tgt");
    for (const AnnotatedPair& pair : split.test) {
      src_out << pair.pair.source.raw << '\n';
      tgt_out << pair.pair.target.raw << '\n';
    }
  }
}

void run_tag(const Options& opt) {
  std::ifstream manifest_in = open_input(opt.manifest);
  const ManifestData manifest = read_manifest(manifest_in, opt.manifest);
  const std::vector<std::string> src_lines = read_lines(opt.src);
  const std::vector<std::string> tgt_lines =
      opt.tgt.empty() ? std::vector<std::string>{} : read_lines(opt.tgt);
  if (!opt.tgt.empty() && tgt_lines.size() != src_lines.size())
    throw InputError("line counts differ: " + opt.src + " has " +
                     std::to_string(src_lines.size()) + ", " + opt.tgt +
                     " has " + std::to_string(tgt_lines.size()));

  // pair_ids are zero-based input line numbers.
  const std::set<std::int64_t> idiomatic(manifest.train_idiom.begin(),
                                         manifest.train_idiom.end());
  std::vector<std::int64_t> training = manifest.train_plain;
  training.insert(training.end(), manifest.train_idiom.begin(),
                  manifest.train_idiom.end());
  std::sort(training.begin(), training.end());
  for (const std::int64_t id : training)
    if (id < 0 || static_cast<std::size_t>(id) >= src_lines.size())
      throw InputError("manifest " + opt.manifest + " references line " +
                       std::to_string(id) + " but " + opt.src + " has " +
                       std::to_string(src_lines.size()) + " lines");

  std::ofstream src_out = open_output(opt.out + ".src");
  for (const std::int64_t id : training) {
    const std::string& line = src_lines[static_cast<std::size_t>(id)];
    src_out << (idiomatic.count(id) ? tag_source_line(line) : line) << '\n';
  }
  if (!opt.tgt.empty()) {
    std::ofstream tgt_out = open_output(opt.out + ".tgt");
    for (const std::int64_t id : training)
      tgt_out << tgt_lines[static_cast<std::size_t>(id)] << '\n';
  }
}

void run_stats(const Options& opt) {
  std::ifstream manifest_in = open_input(opt.manifest);
  const ManifestData manifest = read_manifest(manifest_in, opt.manifest);
  std::ifstream ann_in = open_input(opt.annotations);
  const std::vector<AnnotationRecord> records =
      read_annotations(ann_in, opt.annotations);

  std::vector<std::int64_t> annotated_ids;
  annotated_ids.reserve(records.size());
  for (const AnnotationRecord& record : records)
    annotated_ids.push_back(record.pair_id);
  std::sort(annotated_ids.begin(), annotated_ids.end());
  std::vector<std::int64_t> test_ids = manifest.test;
  std::sort(test_ids.begin(), test_ids.end());
  if (annotated_ids != test_ids)
    throw InputError("annotation file " + opt.annotations +
                     " does not cover the [TEST] section of " + opt.manifest);

  std::set<int> unique_idioms;
  for (const AnnotationRecord& record : records)
    unique_idioms.insert(record.idiom_id);

  std::cout << "Number of unique idioms\t" << unique_idioms.size() << '\n'
            << "Training size\t"
            << manifest.train_plain.size() + manifest.train_idiom.size()
            << '\n'
            << "Idiomatic sentences in training data\t"
            << manifest.train_idiom.size() << '\n'
            << "Test size\t" << manifest.test.size() << '\n';
}

AlignerConfig aligner_config(const Options& opt) {
  AlignerConfig config;
  config.iterations = opt.iters;
  config.use_diagonal_prior = opt.diagonal;
  config.tension = opt.tension;
  return config;
}

void run_align(const Options& opt) {
  const std::vector<SentencePair> corpus = load_corpus(opt, LemmaTable{});
  const std::vector<AlignmentLinkSet> alignments =
      align_corpus_intersect(corpus, aligner_config(opt));
  std::ofstream out = open_output(opt.out);
  write_pharaoh(out, alignments);
}

std::vector<std::string> split_words(const std::string& joined) {
  std::vector<std::string> words;
  std::istringstream in(joined);
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

void run_score(const Options& opt) {
  const LemmaTable table;
  const std::vector<SentencePair> corpus = load_corpus(opt, table);
  std::ifstream ann_in = open_input(opt.annotations);
  const std::vector<AnnotationRecord> records =
      read_annotations(ann_in, opt.annotations);
  if (records.size() != corpus.size())
    throw InputError(opt.annotations + " has " +
                     std::to_string(records.size()) + " records but " +
                     opt.src + " has " + std::to_string(corpus.size()) +
                     " sentences");

  std::vector<AnnotatedPair> test;
  test.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const AnnotationRecord& record = records[i];
    for (const int position : record.positions)
      if (static_cast<std::size_t>(position) >= corpus[i].source.size())
        throw InputError(opt.annotations + ": record for pair " +
                         std::to_string(record.pair_id) +
                         " places the idiom at position " +
                         std::to_string(position) + ", but line " +
                         std::to_string(i + 1) + " of " + opt.src +
                         " has only " + std::to_string(corpus[i].source.size()) +
                         " tokens");
    AnnotatedPair pair;
    pair.pair = corpus[i];
    pair.pair.pair_id = record.pair_id;
    pair.match.idiom_id = record.idiom_id;
    pair.match.positions = record.positions;
    pair.match.assignment = record.assignment;
    pair.idiom_canonical = split_words(record.idiom_canonical);
    pair.target_equivalent = split_words(record.target_equivalent);
    test.push_back(std::move(pair));
  }

  const std::vector<std::string> hyp_lines = read_lines(opt.hypotheses);
  if (hyp_lines.size() != corpus.size())
    throw InputError(opt.hypotheses + " has " +
                     std::to_string(hyp_lines.size()) + " lines but " +
                     opt.src + " has " + std::to_string(corpus.size()));
  std::vector<Sentence> hypotheses;
  std::vector<SentencePair> hyp_corpus;
  hypotheses.reserve(hyp_lines.size());
  hyp_corpus.reserve(hyp_lines.size());
  for (std::size_t i = 0; i < hyp_lines.size(); ++i) {
    try {
      hypotheses.push_back(lemmatize_sentence(hyp_lines[i], table));
    } catch (const EncodingError& e) {
      throw EncodingError(e.what(), opt.hypotheses,
                          static_cast<long>(i) + 1);
    }
    SentencePair pair;
    pair.pair_id = static_cast<std::int64_t>(i);
    pair.source = corpus[i].source;
    pair.target = hypotheses.back();
    hyp_corpus.push_back(std::move(pair));
  }

  const AlignerConfig config = aligner_config(opt);
  const std::vector<AlignmentLinkSet> hypothesis_links =
      align_corpus_intersect(hyp_corpus, config);
  const std::vector<AlignmentLinkSet> reference_links =
      align_corpus_intersect(corpus, config);

  const MetricReport report =
      score_corpus(test, hypotheses, hypothesis_links, reference_links);
  if (opt.out.empty()) {
    write_report(std::cout, report, opt.summary_only);
  } else {
    std::ofstream out = open_output(opt.out);
    write_report(out, report, opt.summary_only);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idiom-aware parallel corpus construction and MT evaluation"};
  app.require_subcommand(1);
  Options opt;

  const auto add_matcher_flags = [&opt](CLI::App* cmd) {
    cmd->add_option("--max-gap", opt.max_gap,
                    "largest gap between consecutive matched words")
        ->capture_default_str();
    cmd->add_flag("--no-reorder", opt.no_reorder,
                  "require idiom words in dictionary order");
  };
  const auto add_aligner_flags = [&opt](CLI::App* cmd) {
    cmd->add_option("--iters", opt.iters, "EM iterations")
        ->capture_default_str();
    cmd->add_flag("--diagonal", opt.diagonal,
                  "weight alignments toward the diagonal");
    cmd->add_option("--tension", opt.tension, "diagonal prior sharpness")
        ->capture_default_str();
  };
  const auto add_corpus_inputs = [&opt](CLI::App* cmd) {
    cmd->add_option("--src", opt.src, "source corpus, one sentence per line")
        ->required();
    cmd->add_option("--tgt", opt.tgt, "target corpus, line-parallel to --src")
        ->required();
  };
  const auto add_lexicon_inputs = [&opt](CLI::App* cmd) {
    cmd->add_option("--lexicon", opt.lexicon,
                    "idiom dictionary: source phrase TAB target equivalent")
        ->required();
    cmd->add_option("--lemmas", opt.lemmas,
                    "lemma table: surface form TAB lemma");
  };

  CLI::App* extract = app.add_subcommand(
      "extract", "Annotate idiom occurrences in a parallel corpus");
  add_corpus_inputs(extract);
  add_lexicon_inputs(extract);
  extract
      ->add_option("--annotations", opt.annotations,
                   "annotation file to write")
      ->required();
  extract
      ->add_option("--out", opt.out,
                   "residual list to write (pair ids without any idiom)")
      ->required();
  add_matcher_flags(extract);

  CLI::App* split = app.add_subcommand(
      "split", "Build the idiom-constrained train/test partition");
  add_corpus_inputs(split);
  add_lexicon_inputs(split);
  split
      ->add_option("--annotations", opt.annotations,
                   "annotation base path; writes BASE.train and BASE.test")
      ->required();
  split->add_option("--manifest", opt.manifest, "split manifest to write")
      ->required();
  split
      ->add_option("--test-size", opt.test_size,
                   "number of test pairs to draw")
      ->required();
  split->add_option("--seed", opt.seed, "sampling seed")
      ->capture_default_str();
  split->add_option("--out", opt.out,
                    "also write BASE.test.src and BASE.test.tgt");
  add_matcher_flags(split);

  CLI::App* tag = app.add_subcommand(
      "tag", "Emit the training corpus with <idm> markers on source lines");
  tag->add_option("--src", opt.src, "source corpus, one sentence per line")
      ->required();
  tag->add_option("--tgt", opt.tgt,
                  "target corpus; also writes the target side when given");
  tag->add_option("--manifest", opt.manifest, "split manifest to read")
      ->required();
  tag->add_option("--out", opt.out,
                  "output base path; writes BASE.src (and BASE.tgt)")
      ->required();

  CLI::App* stats = app.add_subcommand(
      "stats", "Print corpus statistics for a split");
  stats->add_option("--manifest", opt.manifest, "split manifest to read")
      ->required();
  stats
      ->add_option("--annotations", opt.annotations,
                   "test annotation file (the BASE.test written by split)")
      ->required();

  CLI::App* align = app.add_subcommand(
      "align", "Train IBM Model 1 and write intersected Pharaoh alignments");
  add_corpus_inputs(align);
  align->add_option("--out", opt.out, "alignment file to write")->required();
  add_aligner_flags(align);

  CLI::App* score = app.add_subcommand(
      "score", "Evaluate hypothesis translations against an annotated test set");
  score->add_option("hypotheses", opt.hypotheses,
                    "hypothesis file, line-parallel to the test corpus")
      ->required();
  add_corpus_inputs(score);
  score
      ->add_option("--annotations", opt.annotations,
                   "test annotation file, line-parallel to the test corpus")
      ->required();
  score->add_option("--out", opt.out, "report file (default: stdout)");
  score->add_flag("--summary-only", opt.summary_only,
                  "omit per-pair report lines");
  add_aligner_flags(score);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (extract->parsed()) run_extract(opt);
    if (split->parsed()) run_split(opt);
    if (tag->parsed()) run_tag(opt);
    if (stats->parsed()) run_stats(opt);
    if (align->parsed()) run_align(opt);
    if (score->parsed()) run_score(opt);
  } catch (const IntegrityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
