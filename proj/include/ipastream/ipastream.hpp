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

#pragma once

// Umbrella header.

#include "ipastream/analysis.hpp"
#include "ipastream/config.hpp"
#include "ipastream/corpus.hpp"
#include "ipastream/error.hpp"
#include "ipastream/folding.hpp"
#include "ipastream/g2p.hpp"
#include "ipastream/inventory.hpp"
#include "ipastream/lexicon.hpp"
#include "ipastream/report.hpp"
#include "ipastream/rules.hpp"
#include "ipastream/stream.hpp"
#include "ipastream/syllabary.hpp"
