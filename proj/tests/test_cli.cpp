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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ipastream/cli.hpp"

using namespace ipastream;
namespace fs = std::filesystem;

namespace {

const std::string kData = IPASTREAM_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "ipastream_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << content;
  return p.string();
}

const std::string kCha = "rules=" + kData + "/rules/cha.rules";
const std::string kInventory = kData + "/french/inventory_2269.csv";
const std::string kFrenchOutput = kData + "/french/phonemizer_output.txt";
const std::string kFrenchMap = kData + "/french/fold_map.txt";

}  // namespace

TEST(CliConvert, QuickStart) {
  const Result r = run({"convert", "--backend", kCha}, "cha\n");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "tʃ a\n");
}

TEST(CliConvert, UncorrectedSkipsFolding) {
  const std::string map = temp_file("t.map", "tʃ -> t\n");
  EXPECT_EQ(run({"convert", "-b", kCha, "--fold-map", map}, "cha\n").out, "t a\n");
  EXPECT_EQ(run({"convert", "-b", kCha, "--fold-map", map, "--uncorrected"}, "cha\n").out, "tʃ a\n");
}

TEST(CliConvert, WordBoundaries) {
  EXPECT_EQ(run({"convert", "-b", kCha, "--keep_word_boundaries"}, "cha ca\n").out,
            "tʃ a WORD_BOUNDARY k a\n");
  EXPECT_EQ(run({"convert", "-b", kCha}, "cha ca\n").out, "tʃ a k a\n");
}

TEST(CliConvert, OneOutputLinePerInputLine) {
  const Result r = run({"convert", "-b", kCha}, "cha\n\nca\r\n");
  EXPECT_EQ(r.out, "tʃ a\n\nk a\n");
}

TEST(CliConvert, RowErrorsExitOne) {
  const std::string table = "syllabary=" + kData + "/pinyin/syllables.tsv";
  const Result r = run({"convert", "-b", table}, "ma1\nqq\nde\n");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "m a˥\n\nd ə\n");
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(CliConvert, SplitTonesFlag) {
  const std::string table = "syllabary=" + kData + "/pinyin/syllables.tsv";
  EXPECT_EQ(run({"convert", "-b", table, "--split-tones"}, "ma1\n").out, "m a ˥\n");
}

TEST(CliConvert, ConfigErrorsExitTwo) {
  EXPECT_EQ(run({"convert", "-b", "nonsense"}, "a\n").code, 2);
  EXPECT_EQ(run({"convert", "-b", kCha, "--split-tones"}, "a\n").code, 2);
  EXPECT_EQ(run({"convert", "-b", "rules=/no/such/file"}, "a\n").code, 2);
  EXPECT_EQ(run({"convert", "--no-such-flag"}, "").code, 2);
  EXPECT_EQ(run({}, "").code, 2);
}

TEST(CliConvert, ConfigFileWithOverride) {
  const std::string cfg = temp_file("convert.toml", "backend = \"" + kCha + "\"\nkeep_word_boundaries = true\n");
  EXPECT_EQ(run({"convert", "--config", cfg}, "cha ca\n").out, "tʃ a WORD_BOUNDARY k a\n");
  const std::string other = temp_file("other.rules", "map:\nch -> ʃ\na -> ɑ\n");
  EXPECT_EQ(run({"convert", "--config", cfg, "-b", "rules=" + other}, "cha\n").out, "ʃ ɑ\n");
  EXPECT_EQ(run({"convert", "--config", temp_file("bad.toml", "colour = 3\n")}, "").code, 2);
}

TEST(CliValidate, FrenchScenario) {
  const Result r = run({"validate", "--inventory", kInventory, "--inventory-id", "2269", "-i",
                        kFrenchOutput, "--fold-map", kFrenchMap, "--json"});
  EXPECT_EQ(r.code, 1);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["unknown"], (nlohmann::json{"dʒ", "tʃ"}));
  EXPECT_EQ(doc["unseen"], (nlohmann::json{"ɧ"}));
}

TEST(CliValidate, AllowList) {
  const Result r = run({"validate", "--inventory", kInventory, "--inventory-id", "2269", "-i",
                        kFrenchOutput, "--fold-map", kFrenchMap, "--allow", "dʒ,tʃ", "--allow", "ɧ"});
  EXPECT_EQ(r.code, 0);
}

TEST(CliValidate, AlignedFixture) {
  std::string line;
  const auto inventories = load_inventories(kInventory);
  for (const auto& s : inventories[0].segments()) line += s.segment.text() + " ";
  const Result r = run({"validate", "--inventory", kInventory, "--inventory-id", "2269", "-i", "-"}, line + "\n");
  EXPECT_EQ(r.code, 0);
}

TEST(CliValidate, SummaryJsonInput) {
  const std::string summary = temp_file("summary.json", R"({"observed": ["a", "b"]})");
  const std::string inv = temp_file("ab.csv", "InventoryID,LanguageName,ISO6393,Phoneme,SegmentClass\n"
                                              "3,AB,abc,a,vowel\n3,AB,abc,b,consonant\n");
  EXPECT_EQ(run({"validate", "--inventory", inv, "--inventory-id", "3", "-i", summary}).code, 0);
}

TEST(CliValidate, MissingInventoryIdExitsTwo) {
  EXPECT_EQ(run({"validate", "--inventory", kInventory, "-i", kFrenchOutput}).code, 2);
  EXPECT_EQ(run({"validate", "--inventory", kInventory, "--inventory-id", "1", "-i", kFrenchOutput}).code, 2);
}

TEST(CliValidate, InventoryFromEnvironment) {
  ::setenv(cli::kInventoryEnv, kInventory.c_str(), 1);
  const Result r = run({"validate", "--inventory-id", "2269", "-i", kFrenchOutput, "-m", kFrenchMap});
  ::unsetenv(cli::kInventoryEnv);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("ɧ"), std::string::npos);
}

TEST(CliMatch, TwoCandidates) {
  const std::string obs = temp_file("obs.txt", "a ɔɪ b dʒ\n");
  const Result r = run({"match", "--inventory", kData + "/inventories/two_candidates.csv", "-i", obs, "--json"});
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["ranking"].size(), 2u);
  EXPECT_EQ(doc["ranking"][0]["inventory_id"], 10);
  EXPECT_EQ(doc["ranking"][0]["distance"], 0);
  EXPECT_EQ(doc["ranking"][1]["inventory_id"], 20);
  EXPECT_EQ(doc["ranking"][1]["distance"], 5);
}

TEST(CliMatch, SingleCandidateAndEmptyFile) {
  const std::string obs = temp_file("obs1.txt", "a b\n");
  const Result one = run({"match", "--inventory", kData + "/inventories/three_rows.csv", "-i", obs});
  EXPECT_EQ(one.code, 0);
  EXPECT_NE(one.out.find("\n1 "), std::string::npos);
  EXPECT_EQ(run({"match", "--inventory", kData + "/inventories/empty.csv", "-i", obs}).code, 2);
}

TEST(CliCorpus, EndToEnd) {
  const std::string out = (fs::temp_directory_path() / "ipastream_cli_tests" / "corpus_out.csv").string();
  const std::string summary = (fs::temp_directory_path() / "ipastream_cli_tests" / "summary.json").string();
  const Result r = run({"corpus", "-b", kCha, "-i", kData + "/corpus/sample.csv", "-o", out, "--summary", summary});
  EXPECT_EQ(r.code, 0) << r.err;
  const CorpusTable t = read_corpus(out);
  ASSERT_EQ(t.records.size(), 6u);
  EXPECT_EQ(*t.records[0].phonemized, "tʃ a tʃ a");
  EXPECT_EQ(*t.records[2].phonemized, "a k tʃ a");
  std::ifstream sin(summary);
  const auto doc = nlohmann::json::parse(sin);
  EXPECT_EQ(doc["rows"], 6);
  EXPECT_EQ(doc["observed"], (nlohmann::json{"a", "k", "tʃ"}));
}

TEST(CliCorpus, WorkerCountDoesNotChangeOutput) {
  std::string text = "id,transcript_id,corpus_id,collection_id,speaker_code,target_child_age,gloss\n";
  for (int i = 0; i < 1500; ++i)
    text += std::to_string(i) + ",1,1,1," + (i % 4 ? "MOT" : "CHI") + ",2;01.00," + (i % 7 ? "cha ca" : "ac") + "\n";
  const std::string in = temp_file("many.csv", text);
  const Result one = run({"corpus", "-b", kCha, "-i", in, "-j", "1"});
  const Result four = run({"corpus", "-b", kCha, "-i", in, "-j", "4"});
  EXPECT_EQ(one.out, four.out);
}

TEST(CliCorpus, SortByAge) {
  const std::string in = temp_file("ages.csv",
                                   "id,transcript_id,corpus_id,collection_id,speaker_code,target_child_age,gloss\n"
                                   "1,1,1,1,MOT,3;00.00,ca\n2,1,1,1,MOT,1;00.00,cha\n");
  const Result r = run({"corpus", "-b", kCha, "-i", in, "--sort-by-age"});
  EXPECT_LT(r.out.find("\n2,"), r.out.find("\n1,"));
}

TEST(CliCorpus, ColumnMapping) {
  const std::string in = temp_file("mapped.csv",
                                   "id,transcript_id,corpus_id,collection_id,speaker_code,target_child_age,utterance\n"
                                   "1,1,1,1,MOT,,cha\n");
  EXPECT_EQ(run({"corpus", "-b", kCha, "-i", in}).code, 2);
  const Result r = run({"corpus", "-b", kCha, "-i", in, "--column", "gloss=utterance"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("tʃ a"), std::string::npos);
}

TEST(CliStats, FrequencyTable) {
  const Result r = run({"stats", "-i", "-", "--json"}, "a b a\ntʃ a WORD_BOUNDARY b\n");
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["frequencies"], (nlohmann::json{{"a", 3}, {"b", 2}, {"tʃ", 1}}));
  EXPECT_EQ(doc["tokens"], 6);
}

TEST(CliStats, SpeakersFromCorpus) {
  const std::string in = temp_file("phon.csv",
                                   "id,speaker_code,phonemized\n1,MOT,a b\n2,CHI,c\n3,MOT,a\n");
  const auto adult = nlohmann::json::parse(run({"stats", "-i", in, "--speakers", "adult", "--json"}).out);
  EXPECT_EQ(adult["frequencies"], (nlohmann::json{{"a", 2}, {"b", 1}}));
  const auto child = nlohmann::json::parse(run({"stats", "-i", in, "--speakers", "child", "--json"}).out);
  EXPECT_EQ(child["frequencies"], (nlohmann::json{{"c", 1}}));
}

TEST(CliStats, TestsAndFeatures) {
  const Result r = run({"stats", "--binomial", "8", "10", "--vectors", kData + "/vectors/four_points.csv",
                        "--inventory", kData + "/inventories/features.csv", "--inventory-id", "5", "--json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["binomial"]["p_value"].get<double>(), 0.0546875, 1e-12);
  EXPECT_NEAR(doc["silhouette"]["mean"].get<double>(), 1.0 - 2.0 / (10.0 + std::sqrt(101.0)), 1e-12);
  EXPECT_EQ(doc["eligible_features"], (nlohmann::json{"syllabic", "labial"}));
}

TEST(CliStats, Compare) {
  const Result r = run({"stats", "-i", kData + "/french/phonemizer_output.txt", "--compare",
                        kData + "/french/epitran_output.txt", "--json"});
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["compare"]["counts"]["only_a"], 8);
  EXPECT_EQ(doc["compare"]["counts"]["both"], 29);
  EXPECT_EQ(doc["compare"]["counts"]["only_b"], 2);
}

TEST(CliInfo, TwoBucketCurve) {
  const std::string in = temp_file("info.csv",
                                   "id,transcript_id,corpus_id,collection_id,speaker_code,target_child_age,gloss,phonemized\n"
                                   "1,1,1,1,MOT,0;05.27,x,a b\n2,1,1,1,MOT,1;00.00,x,b a\n3,1,1,1,CHI,1;00.00,x,a a a\n");
  const Result r = run({"info", "-i", in});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "age_bucket,mean_information,n_utterances\n0,2.000000000,1\n1,2.000000000,1\n");
}

TEST(CliCheckMap, ExitCodes) {
  EXPECT_EQ(run({"check-map", kFrenchMap}).code, 0);
  const Result bad = run({"check-map", temp_file("chain.map", "a -> b\nb -> c\n")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("non_confluent"), std::string::npos);
  EXPECT_EQ(run({"check-map", temp_file("broken.map", "a b\n")}).code, 2);
}

TEST(CliSuggest, DiacriticCandidates) {
  const std::string inv = temp_file("asp.csv", "InventoryID,LanguageName,ISO6393,Phoneme,SegmentClass\n"
                                               "1,X,x,tʰ,consonant\n1,X,x,a,vowel\n");
  const Result r = run({"suggest", "--inventory", inv, "--inventory-id", "1", "-i", "-", "--json"}, "t a\n");
  EXPECT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["suggestions"].size(), 1u);
  EXPECT_EQ(doc["suggestions"][0]["candidate"], "tʰ");
}

TEST(CliHelp, ExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }
