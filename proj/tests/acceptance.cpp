// Copyright 2026 The ipastream Authors
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

// Acceptance suite. One line per criterion:
//
//   PASS  [n] name  (detail)
//
// Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipastream/cli.hpp"
#include "ipastream/ipastream.hpp"
#include "oracles.hpp"

using namespace ipastream;

namespace {

const std::string kData = IPASTREAM_DATA_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

// 1 --------------------------------------------------------------------------

Outcome french_validation() {
  const auto start = Clock::now();
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::run({"validate", "--inventory", kData + "/french/inventory_2269.csv",
                             "--inventory-id", "2269", "--input",
                             kData + "/french/phonemizer_output.txt", "--fold-map",
                             kData + "/french/fold_map.txt", "--json"},
                            in, out, err);
  const double elapsed = seconds_since(start);
  const auto doc = nlohmann::json::parse(out.str());
  const bool sets = doc["unknown"] == nlohmann::json{"dʒ", "tʃ"} && doc["unseen"] == nlohmann::json{"ɧ"};
  return {sets && code == 1 && elapsed < 1.0,
          "unknown=" + doc["unknown"].dump() + " unseen=" + doc["unseen"].dump() +
              " exit=" + std::to_string(code) + fmt(" %.3fs", elapsed)};
}

// 2 --------------------------------------------------------------------------

struct GoldenFold {
  const char* language;
  const char* map;
  const char* input;
  const char* expected;
  FoldKind kind;
  long token_delta;
};

Outcome fold_taxonomy() {
  const GoldenFold cases[] = {
      {"Swedish", "n -> n̪\n", "n a n", "n̪ a n̪", FoldKind::one_to_one, 0},
      {"Portuguese", "ɾ -> ʁ\nr -> ʁ\n", "ɾ a r u", "ʁ a ʁ u", FoldKind::many_to_one, 0},
      {"Serbian", "d ʒ -> dʒ\n", "d ʒ a", "dʒ a", FoldKind::merge, -1},
      {"Cantonese", "o u -> ou\n", "s o u", "s ou", FoldKind::merge, -1},
      {"en-us", "aɪʊ -> aɪ ʊ\n", "h aɪʊ", "h aɪ ʊ", FoldKind::split, +1},
      {"Estonian", "d d -> dː\n", "d d a d d", "dː a dː", FoldKind::dedup, -2},
      {"Korean", "k h -> kʰ\np h -> pʰ\n", "k h a p h", "kʰ a pʰ", FoldKind::diacritic, -2},
      {"Hungarian", "ô -> øː [orthographic]\n", "ʃ ô r", "ʃ øː r", FoldKind::orthographic, 0},
  };
  const auto start = Clock::now();
  std::string failures;
  for (const auto& c : cases) {
    const FoldMap map = parse_fold_map(c.map);
    const PhonemeStream in = parse_stream(c.input);
    const PhonemeStream out = apply_fold(map, in);
    const long delta = static_cast<long>(out.segment_count()) - static_cast<long>(in.segment_count());
    const bool kinds_ok = std::all_of(map.rules.begin(), map.rules.end(),
                                      [&](const FoldRule& r) { return r.kind == c.kind; });
    if (emit_stream(out, true) != c.expected || delta != c.token_delta || !kinds_ok)
      failures += std::string(" ") + c.language;
  }
  const double elapsed = seconds_since(start);
  return {failures.empty() && elapsed < 1.0,
          (failures.empty() ? std::string("8/8 golden") : "failed:" + failures) + fmt(" %.3fs", elapsed)};
}

// 3 --------------------------------------------------------------------------

Outcome stream_round_trip() {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> pool{"a", "b", "tʃ", "dʒ", "ɔɪ", "a˥", "n̪", "kʰ", "øː", "ɛ̃", "m̩", "˧˥"};
  int failures = 0;
  for (int checked = 0; checked < 1000;) {
    std::vector<StreamToken> tokens;
    const std::size_t n = rng() % 20;
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = rng() % 10;
      if (r == 0) tokens.emplace_back(WordBoundary{});
      else if (r == 1) tokens.emplace_back(UttBoundary{});
      else tokens.emplace_back(IpaSegment(pool[rng() % pool.size()]));
    }
    PhonemeStream s(std::move(tokens));
    // canonical streams carry no trailing utterance boundary
    if (!s.empty() && is_utt_boundary(s.tokens().back())) {
      std::vector<StreamToken> t = s.tokens();
      t.pop_back();
      s = PhonemeStream(std::move(t));
      if (!s.empty() && is_utt_boundary(s.tokens().back())) continue;
    }
    ++checked;
    if (parse_stream(emit_stream(s, true)) != s) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures / 1000 streams"};
}

// 4 --------------------------------------------------------------------------

Outcome greedy_oracle() {
  // NFD spellings, so clusters and outputs compare byte for byte
  const std::vector<std::string> alphabet{"a", "b", "c", "é"};
  const std::vector<std::string> outputs{"p", "tʃ", "k s", "a", "ɛ̃", "ʁ"};
  std::mt19937 rng(99);

  // every word of length 1..6 over the alphabet, as letter indices
  std::vector<std::vector<int>> words;
  for (int len = 1; len <= 6; ++len) {
    std::vector<int> w(len, 0);
    for (;;) {
      words.push_back(w);
      int i = len - 1;
      while (i >= 0 && ++w[i] == 4) w[i--] = 0;
      if (i < 0) break;
    }
  }

  const auto start = Clock::now();
  long mismatches = 0;
  long checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    // key code: base-5 digits (letter + 1), so lengths are distinct codes
    std::map<int, std::string> keys;
    std::string text = "map:\n";
    while (keys.size() < 6) {
      const int len = 1 + static_cast<int>(rng() % 3);
      int code = 0;
      std::string graphemes;
      for (int i = 0; i < len; ++i) {
        const int letter = static_cast<int>(rng() % 4);
        code = code * 5 + letter + 1;
        graphemes += alphabet[letter];
      }
      const std::string out = outputs[rng() % outputs.size()];
      if (!keys.emplace(code, out).second) continue;
      text += graphemes + " -> " + out + "\n";
    }
    const RuleSet rs = parse_rule_set(text);

    for (const auto& w : words) {
      // brute force: enumerate all cuts, keep the lexicographically longest pieces
      std::vector<int> best_cut, cut;
      std::vector<int> best_len, len_seq;
      std::function<void(std::size_t)> walk = [&](std::size_t at) {
        if (at == w.size()) {
          if (best_len.empty() || len_seq > best_len) {
            best_len = len_seq;
            best_cut = cut;
          }
          return;
        }
        int code = 0;
        for (std::size_t l = 1; at + l <= w.size(); ++l) {
          code = code * 5 + w[at + l - 1] + 1;
          if (l > 1 && !keys.count(code)) continue;
          cut.push_back(static_cast<int>(at));
          len_seq.push_back(static_cast<int>(l));
          walk(at + l);
          cut.pop_back();
          len_seq.pop_back();
        }
      };
      walk(0);

      std::string expected, word;
      for (int letter : w) word += alphabet[letter];
      for (std::size_t p = 0; p < best_cut.size(); ++p) {
        int code = 0;
        for (int l = 0; l < best_len[p]; ++l) code = code * 5 + w[best_cut[p] + l] + 1;
        auto it = keys.find(code);
        if (!expected.empty()) expected += ' ';
        expected += it != keys.end() ? it->second : alphabet[w[best_cut[p]]];
      }
      if (join(convert_rules(rs, word).segments) != expected) ++mismatches;
      ++checked;
    }
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 30.0,
          std::to_string(mismatches) + " mismatches / " + std::to_string(checked) + " words, 500 rule sets" +
              fmt(" %.1fs", elapsed)};
}

// 5 --------------------------------------------------------------------------

Outcome tone_handling() {
  const auto table = std::make_shared<const SyllableTable>(load_syllable_table(kData + "/pinyin/syllables.tsv"));
  const std::string merged = emit_stream(convert_utterance(SyllabaryBackend{table, false}, "ma1", false), false);
  const std::string split = emit_stream(convert_utterance(SyllabaryBackend{table, true}, "ma1", false), false);
  bool ok = merged == "m a˥" && split == "m a ˥";

  std::mt19937 rng(5);
  const std::vector<std::string> onsets{"", "p", "tʰ", "k", "m", "n", "s", "x", "ʂ", "tɕ", "l"};
  const std::vector<std::string> vowels{"a", "i", "u", "ə", "o", "y", "ɛ", "aɪ", "ou"};
  const std::vector<std::string> codas{"", "n", "ŋ"};
  const std::vector<std::string> tones{"˥", "˧˥", "˨˩˦", "˥˩", "˧", "˨˩"};
  std::string text;
  std::vector<std::string> keys;
  for (int i = 0; i < 1000; ++i) {
    std::string segs;
    if (rng() % 20 == 0) {
      segs = rng() % 2 ? "m̩" : "ŋ̍";  // syllabic nasal, no vowel
    } else {
      const std::string& on = onsets[rng() % onsets.size()];
      if (!on.empty()) segs += on + " ";
      segs += vowels[rng() % vowels.size()];
      if (rng() % 3 == 0) segs += " " + vowels[rng() % vowels.size()];
      const std::string& coda = codas[rng() % codas.size()];
      if (!coda.empty()) segs += " " + coda;
    }
    char key[16];
    std::snprintf(key, sizeof key, "s%04d", i);
    keys.push_back(key);
    text += keys.back() + "\t" + segs + "\t" + tones[rng() % tones.size()] + "\n";
  }
  const SyllableTable generated = parse_syllable_table(text);
  int standalone = 0, lost = 0, bad_split = 0;
  for (const auto& key : keys) {
    const SegmentSeq on = convert_syllables(generated, key, false);
    const SegmentSeq off = convert_syllables(generated, key, true);
    const std::size_t base = syllable_to_ipa(generated, key).segments.size();
    for (const auto& seg : on) standalone += ipa::is_tone_only(seg.text());
    lost += on.size() != base || std::none_of(on.begin(), on.end(), [](const IpaSegment& s) {
      return ipa::first_tone_offset(s.text()) != static_cast<std::size_t>(-1);
    });
    bad_split += off.size() != base + 1 ||
                 std::count_if(off.begin(), off.end(), [](const IpaSegment& s) { return ipa::is_tone_only(s.text()); }) != 1;
  }
  ok = ok && standalone == 0 && lost == 0 && bad_split == 0;
  return {ok, "\"ma1\" -> \"" + merged + "\" / \"" + split + "\"; " + std::to_string(standalone) +
                  " standalone tones, " + std::to_string(lost + bad_split) + " other defects / 1000 syllables"};
}

// 6 --------------------------------------------------------------------------

Outcome fold_idempotence() {
  std::mt19937 rng(17);
  const std::vector<std::string> alphabet{"a", "b", "c", "d", "e"};
  const std::vector<std::string> targets{"a", "b", "c", "X", "Y", "Z", "dʒ", "aː"};
  int clean = 0, attempts = 0, failures = 0;
  while (clean < 500 && attempts < 200000) {
    ++attempts;
    std::string text;
    const unsigned n_rules = 1 + rng() % 4;
    for (unsigned r = 0; r < n_rules; ++r) {
      for (unsigned i = 0, len = 1 + rng() % 3; i < len; ++i) text += alphabet[rng() % alphabet.size()] + " ";
      text += "->";
      for (unsigned i = 0, len = 1 + rng() % 2; i < len; ++i) text += " " + targets[rng() % targets.size()];
      text += "\n";
    }
    FoldMap map;
    try {
      map = parse_fold_map(text);
    } catch (const FormatError&) {
      continue;  // duplicate left-hand side
    }
    if (!check_fold_map(map).empty()) continue;
    ++clean;
    for (int s = 0; s < 40; ++s) {
      std::string line;
      for (unsigned i = 0, len = rng() % 16; i < len; ++i)
        line += (rng() % 8 == 0 ? std::string("WORD_BOUNDARY") : alphabet[rng() % alphabet.size()]) + " ";
      const PhonemeStream once = apply_fold(map, parse_stream(line));
      if (apply_fold(map, once) != once) ++failures;
    }
  }
  return {clean == 500 && failures == 0,
          std::to_string(failures) + " failures over " + std::to_string(clean) + " clean maps (x40 streams)"};
}

// 7 --------------------------------------------------------------------------

Outcome unigram_information() {
  const UnigramModel fair = build_unigram(std::vector<PhonemeStream>{parse_stream("a b")}, Smoothing::none);
  const double two = utterance_information(fair, parse_stream("a b"));
  const UnigramModel skewed = build_unigram(std::vector<PhonemeStream>{parse_stream("a a a b")}, Smoothing::none);
  const double got = utterance_information(skewed, parse_stream("a a b"));
  const double want = -2.0 * std::log2(0.75) - std::log2(0.25);

  // Five age buckets; every utterance is a whole number of "a b c d" blocks,
  // so the pooled model is uniform (2 bits/segment) and bucket k has mean
  // 4 * (2k + 3) bits.
  std::vector<UtteranceRecord> recs;
  auto add = [&](std::optional<double> months, std::string phon, std::string error = {}) {
    UtteranceRecord r;
    r.target_child_age = months;
    r.phonemized = std::move(phon);
    r.errors = std::move(error);
    recs.push_back(std::move(r));
  };
  for (int k = 0; k < 5; ++k) {
    std::string first, second;
    for (int i = 0; i < k + 1; ++i) first += "a b c d ";
    for (int i = 0; i < k + 2; ++i) second += "d c WORD_BOUNDARY b a ";
    add(12.0 * k + 6.0, first);
    add(12.0 * k + 11.5, second);
  }
  add(std::nullopt, "z z z");         // no age: ignored
  add(30.0, "", "conversion failed");  // error row: ignored
  double worst = 0.0;
  bool shape = true;
  for (bool pooled : {true, false}) {
    const auto curve = info_by_age(recs, {pooled, std::nullopt, 0});
    shape = shape && curve.size() == 5;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      shape = shape && curve[k].age_bucket == static_cast<int>(k) && curve[k].n_utterances == 2;
      worst = std::max(worst, std::abs(curve[k].mean_information - 4.0 * (2.0 * k + 3.0)));
    }
  }
  const bool ok = two == 2.0 && std::abs(got - want) <= 1e-9 && shape && worst <= 1e-9;
  return {ok, fmt("uniform=%.1f", two) + fmt(" skewed=%.10f", got) + fmt(" curve max err=%.1e", worst)};
}

// 8 --------------------------------------------------------------------------

Outcome binomial() {
  double worst = 0.0;
  for (int n = 1; n <= 30; ++n)
    for (int k = 0; k <= n; ++k)
      worst = std::max(worst, std::abs(binomial_test(k, n) - static_cast<double>(oracle::binomial_tail(k, n, 0.5L))));
  const double five = binomial_test(5, 5);
  return {worst <= 1e-12 && five == 0.03125,
          fmt("max err %.2e over n<=30", worst) + fmt(", k=5,n=5 -> %.5f", five)};
}

// 9 --------------------------------------------------------------------------

Outcome silhouette_score() {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  double worst = 0.0;
  long out_of_range = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 199;
    const std::size_t dims = 1 + rng() % 32;
    const std::size_t k = 2 + rng() % std::min<std::size_t>(6, n - 1);
    LabeledVectorSet set;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t label = i < k ? i : rng() % k;  // every label used
      std::vector<double> v(dims);
      for (auto& x : v) x = coord(rng) + 3.0 * static_cast<double>(label);
      set.vectors.push_back(std::move(v));
      set.labels.push_back("c" + std::to_string(label));
    }
    const double got = silhouette(set);
    worst = std::max(worst, std::abs(got - oracle::silhouette(set.vectors, set.labels)));
    for (double s : silhouette_samples(set)) out_of_range += s < -1.0 || s > 1.0;
    out_of_range += got < -1.0 || got > 1.0;
  }
  return {worst <= 1e-9 && out_of_range == 0,
          fmt("max err %.2e over 100 sets", worst) + ", " + std::to_string(out_of_range) + " out of [-1,1]"};
}

// 10 -------------------------------------------------------------------------

Outcome corpus_determinism() {
  std::mt19937 rng(8);
  const std::vector<std::string> words{"cha", "ca", "ac", "acha", "chaca", "cac", "a"};
  std::ostringstream text;
  text << "id,transcript_id,corpus_id,collection_id,speaker_code,target_child_age,gloss\n";
  for (int i = 0; i < 10000; ++i) {
    text << i << ',' << i / 100 << ",1,1," << (rng() % 3 ? "MOT" : "CHI") << ',' << (rng() % 5) << ';'
         << (rng() % 12 < 10 ? "0" : "1") << rng() % 10 << ".00,";
    const unsigned n = 1 + rng() % 8;
    for (unsigned w = 0; w < n; ++w) text << (w ? " " : "") << words[rng() % words.size()];
    text << '\n';
  }
  const std::string corpus = text.str();
  const Backend backend = RulesBackend{std::make_shared<const RuleSet>(load_rule_set(kData + "/rules/cha.rules"))};
  const FoldMap map = parse_fold_map("a a -> aː\n");

  auto run = [&](unsigned workers, double& rate) {
    std::istringstream in(corpus);
    CorpusTable table = read_corpus(in);
    const auto start = Clock::now();
    convert_corpus(table.records, backend, &map, {true, false, workers});
    rate = static_cast<double>(table.records.size()) / seconds_since(start) * 60.0;
    std::ostringstream out;
    write_corpus(out, table);
    return out.str();
  };
  double rate1 = 0.0, rate8 = 0.0;
  const std::string one = run(1, rate1);
  const std::string eight = run(8, rate8);
  const bool identical = one == eight && !one.empty();
  return {identical, std::string(identical ? "byte-identical" : "outputs differ") + ", " +
                         std::to_string(std::count(one.begin(), one.end(), '\n')) + " lines; throughput " +
                         fmt("%.0f", rate1) + " utt/min (1 worker), " + fmt("%.0f", rate8) +
                         " utt/min (8 workers), target 100000 (not gated)"};
}

// 11 -------------------------------------------------------------------------

Outcome feature_eligibility() {
  const auto invs = load_inventories(kData + "/inventories/features.csv");
  const std::vector<std::string> got = eligible_features(invs.at(0));
  // hand count: syllabic 5/6, labial 4/6 eligible; nasal 3/8 and high 3/4 not; tone all 0
  const std::vector<std::string> want{"syllabic", "labial"};
  std::string list;
  for (const auto& f : got) list += (list.empty() ? "" : ",") + f;
  return {got == want, "eligible {" + list + "}"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"French validation scenario", french_validation},
      {"Folding error taxonomy", fold_taxonomy},
      {"Stream round trip", stream_round_trip},
      {"Greedy G2P vs brute-force segmenter", greedy_oracle},
      {"Tone handling", tone_handling},
      {"Fold idempotence", fold_idempotence},
      {"Unigram information", unigram_information},
      {"Binomial test", binomial},
      {"Silhouette", silhouette_score},
      {"Corpus pipeline determinism", corpus_determinism},
      {"Feature eligibility", feature_eligibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].first << "  (" << o.detail
              << ")" << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
