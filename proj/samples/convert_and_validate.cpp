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

// Library walk-through: rule-based conversion, folding, and an inventory
// check against the French fixture.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "ipastream/ipastream.hpp"

#ifndef IPASTREAM_DATA_DIR
#define IPASTREAM_DATA_DIR "data"
#endif

using namespace ipastream;

int main() {
  const std::string data = IPASTREAM_DATA_DIR;

  auto rules = std::make_shared<const RuleSet>(parse_rule_set("map:\nch -> tʃ\nc -> k\na -> a\n"));
  const Backend backend = RulesBackend{rules};
  for (const char* line : {"cha", "cha ca", "acha!"}) {
    const PhonemeStream s = convert_utterance(backend, line, /*keep_word_boundaries=*/true);
    std::cout << line << "\t" << emit_stream(s, true) << "\n";
  }

  const FoldMap map = load_fold_map(data + "/french/fold_map.txt");
  for (const auto& d : check_fold_map(map)) std::cout << "warning: " << d.message << "\n";

  SegmentSet observed;
  std::ifstream in(data + "/french/phonemizer_output.txt");
  for (std::string line; std::getline(in, line);) {
    const SegmentSet types = segment_types(apply_fold(map, parse_stream(line)));
    observed.insert(types.begin(), types.end());
  }

  const auto inventories = load_inventories(data + "/french/inventory_2269.csv");
  const Inventory& french = find_inventory(inventories, 2269);
  const DiffReport diff = diff_inventory(observed, french);
  report::write_diff_text(std::cout, diff, suggest_mappings(diff, french));
  return 0;
}
