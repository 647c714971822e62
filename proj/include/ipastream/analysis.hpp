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

// Corpus and inventory statistics.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ipastream/corpus.hpp"
#include "ipastream/csv.hpp"
#include "ipastream/error.hpp"
#include "ipastream/inventory.hpp"
#include "ipastream/stream.hpp"

namespace ipastream {

// ---------------------------------------------------------------------------
// Frequencies and unigram information

using FrequencyTable = std::map<IpaSegment, std::size_t>;

inline void count_into(FrequencyTable& table, const PhonemeStream& s) {
  for (const auto& t : s.tokens())
    if (const auto* seg = std::get_if<IpaSegment>(&t)) ++table[*seg];
}

inline FrequencyTable frequency_table(std::span<const PhonemeStream> streams) {
  FrequencyTable table;
  for (const auto& s : streams) count_into(table, s);
  return table;
}

/// Same counts, computed over `workers` contiguous shards.
inline FrequencyTable frequency_table(std::span<const PhonemeStream> streams, unsigned workers) {
  workers = std::max(1u, workers);
  if (workers == 1) return frequency_table(streams);
  std::vector<FrequencyTable> partial(workers);
  std::vector<std::thread> threads;
  const std::size_t shard = (streams.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const std::size_t begin = std::min(streams.size(), w * shard);
      const std::size_t end = std::min(streams.size(), begin + shard);
      for (std::size_t i = begin; i < end; ++i) count_into(partial[w], streams[i]);
    });
  }
  for (auto& t : threads) t.join();
  FrequencyTable table;
  for (const auto& p : partial)
    for (const auto& [seg, n] : p) table[seg] += n;
  return table;
}

enum class Smoothing { none, add_one };

class UnigramModel {
 public:
  UnigramModel(std::map<IpaSegment, double> probabilities, double unknown_probability,
               std::size_t total_tokens, Smoothing smoothing)
      : probabilities_(std::move(probabilities)),
        unknown_probability_(unknown_probability),
        total_tokens_(total_tokens),
        smoothing_(smoothing) {}

  const std::map<IpaSegment, double>& probabilities() const noexcept { return probabilities_; }
  /// Mass reserved for unseen segments; zero without smoothing.
  double unknown_probability() const noexcept { return unknown_probability_; }
  std::size_t total_tokens() const noexcept { return total_tokens_; }
  Smoothing smoothing() const noexcept { return smoothing_; }

  /// Throws UnseenSymbolError for an unseen segment when unsmoothed.
  double probability(const IpaSegment& seg) const {
    auto it = probabilities_.find(seg);
    if (it != probabilities_.end()) return it->second;
    if (smoothing_ == Smoothing::none) throw UnseenSymbolError(seg.text());
    return unknown_probability_;
  }

 private:
  std::map<IpaSegment, double> probabilities_;
  double unknown_probability_;
  std::size_t total_tokens_;
  Smoothing smoothing_;
};

/// MLE over segment tokens. Add-one smoothing treats a single unknown
/// symbol as one more vocabulary item.
inline UnigramModel build_unigram(const FrequencyTable& counts, Smoothing smoothing) {
  std::size_t total = 0;
  for (const auto& [seg, n] : counts) total += n;
  if (total == 0) throw ArgumentError("cannot build a unigram model from zero segments");
  const double extra = smoothing == Smoothing::add_one ? 1.0 : 0.0;
  const double denom = static_cast<double>(total) + extra * static_cast<double>(counts.size() + 1);
  std::map<IpaSegment, double> probs;
  for (const auto& [seg, n] : counts) probs.emplace(seg, (static_cast<double>(n) + extra) / denom);
  return UnigramModel(std::move(probs), extra / denom, total, smoothing);
}

inline UnigramModel build_unigram(std::span<const PhonemeStream> streams, Smoothing smoothing) {
  return build_unigram(frequency_table(streams), smoothing);
}

/// Sum of -log2 P over the segments of an utterance, in bits.
inline double utterance_information(const UnigramModel& m, const PhonemeStream& s) {
  double bits = 0.0;
  for (const auto& t : s.tokens())
    if (const auto* seg = std::get_if<IpaSegment>(&t)) bits -= std::log2(m.probability(*seg));
  return bits;
}

struct InfoCurvePoint {
  int age_bucket;  ///< bucket k covers [12k, 12k + 12) months
  double mean_information;
  std::size_t n_utterances;
};

struct InfoOptions {
  bool pooled = true;  ///< one model over all sampled utterances, else one per bucket
  std::optional<std::size_t> sample_size;  ///< per bucket; all utterances when absent
  std::uint64_t seed = 0;
};

inline int age_bucket(double months) { return static_cast<int>(std::floor(months / 12.0)); }

/// Mean utterance information per one-year age bucket. Records without an
/// age, with a conversion error, or with no segments are ignored; filtering
/// child-produced rows is the caller's job.
inline std::vector<InfoCurvePoint> info_by_age(std::span<const UtteranceRecord> records,
                                               const InfoOptions& options = {}) {
  std::map<int, std::vector<PhonemeStream>> buckets;
  for (const auto& rec : records) {
    if (!rec.target_child_age || !rec.phonemized || !rec.errors.empty()) continue;
    PhonemeStream s = parse_stream(*rec.phonemized);
    if (s.segment_count() == 0) continue;
    buckets[age_bucket(*rec.target_child_age)].push_back(std::move(s));
  }

  if (options.sample_size) {
    std::mt19937_64 rng(options.seed);
    for (auto& [bucket, streams] : buckets) {
      const std::size_t keep = std::min(*options.sample_size, streams.size());
      std::vector<std::size_t> order(streams.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      // Partial Fisher-Yates; raw engine output keeps the draw portable.
      for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (order.size() - i));
        std::swap(order[i], order[j]);
      }
      order.resize(keep);
      std::sort(order.begin(), order.end());
      std::vector<PhonemeStream> sampled;
      sampled.reserve(keep);
      for (std::size_t i : order) sampled.push_back(std::move(streams[i]));
      streams = std::move(sampled);
    }
  }

  std::optional<UnigramModel> pooled;
  if (options.pooled) {
    FrequencyTable all;
    for (const auto& [bucket, streams] : buckets)
      for (const auto& s : streams) count_into(all, s);
    if (!all.empty()) pooled = build_unigram(all, Smoothing::none);
  }

  std::vector<InfoCurvePoint> curve;
  for (const auto& [bucket, streams] : buckets) {
    if (streams.empty()) continue;
    const UnigramModel model =
        options.pooled ? *pooled : build_unigram(std::span<const PhonemeStream>(streams),
                                                 Smoothing::none);
    double total = 0.0;
    for (const auto& s : streams) total += utterance_information(model, s);
    curve.push_back({bucket, total / static_cast<double>(streams.size()), streams.size()});
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Inventory comparison and features

struct VennReport {
  SegmentSet only_a;
  SegmentSet both;
  SegmentSet only_b;
};

inline VennReport compare_inventories(const SegmentSet& a, const SegmentSet& b) {
  VennReport r;
  for (const auto& s : a) (b.contains(s) ? r.both : r.only_a).insert(s);
  for (const auto& s : b)
    if (!a.contains(s)) r.only_b.insert(s);
  return r;
}

struct FeatureCounts {
  std::string feature;
  std::size_t plus = 0;
  std::size_t minus = 0;
  std::size_t unspecified = 0;
};

inline std::vector<FeatureCounts> feature_counts(const Inventory& inv) {
  std::vector<FeatureCounts> out;
  for (const auto& name : inv.feature_names()) out.push_back({name});
  for (const auto& seg : inv.segments()) {
    for (std::size_t f = 0; f < seg.features.size(); ++f) {
      switch (seg.features[f]) {
        case Ternary::plus: ++out[f].plus; break;
        case Ternary::minus: ++out[f].minus; break;
        case Ternary::unspecified: ++out[f].unspecified; break;
      }
    }
  }
  return out;
}

/// Features with at least `min_each` segments marked "+" and at least
/// `min_each` marked "-", in schema order.
inline std::vector<std::string> eligible_features(const Inventory& inv, std::size_t min_each = 4) {
  std::vector<std::string> out;
  for (const auto& c : feature_counts(inv))
    if (c.plus >= min_each && c.minus >= min_each) out.push_back(c.feature);
  return out;
}

// ---------------------------------------------------------------------------
// Significance and clustering

/// One-sided upper tail P(X >= k) for X ~ Binomial(n, p0), summed in log2
/// space so large n does not underflow term by term.
inline double binomial_test(long k, long n, double p0 = 0.5) {
  if (n < 1) throw ArgumentError("binomial_test needs n >= 1");
  if (k < 0 || k > n) throw ArgumentError("binomial_test needs 0 <= k <= n");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw ArgumentError("binomial_test needs 0 <= p0 <= 1");
  if (k == 0) return 1.0;
  if (p0 == 0.0) return 0.0;
  if (p0 == 1.0) return 1.0;

  const double log2e = 1.0 / std::log(2.0);
  const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
  const double log2_p = std::log2(p0);
  const double log2_q = std::log2(1.0 - p0);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n - k + 1));
  for (long i = k; i <= n; ++i) {
    const double log_choose = lg_n - std::lgamma(static_cast<double>(i) + 1.0) -
                              std::lgamma(static_cast<double>(n - i) + 1.0);
    terms.push_back(log_choose * log2e + static_cast<double>(i) * log2_p +
                    static_cast<double>(n - i) * log2_q);
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp2(t - top);
  return std::min(1.0, std::exp2(top) * sum);
}

struct LabeledVectorSet {
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> labels;
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

/// Per-point silhouette scores. Points in singleton clusters score 0, as do
/// points with a == b == 0.
inline std::vector<double> silhouette_samples(const LabeledVectorSet& set) {
  const std::size_t n = set.vectors.size();
  if (set.labels.size() != n) throw ArgumentError("vectors and labels differ in length");
  for (const auto& v : set.vectors)
    if (v.size() != set.vectors.front().size())
      throw ArgumentError("vectors must share one dimension");

  std::map<std::string, std::size_t> cluster_of;
  std::vector<std::size_t> cluster(n);
  for (std::size_t i = 0; i < n; ++i)
    cluster[i] = cluster_of.emplace(set.labels[i], cluster_of.size()).first->second;
  const std::size_t k = cluster_of.size();
  if (k < 2) throw ArgumentError("silhouette needs at least two distinct labels");
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t c : cluster) ++sizes[c];

  std::vector<double> scores(n, 0.0);
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[cluster[i]] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sums[cluster[j]] += euclidean(set.vectors[i], set.vectors[j]);
    const double a = sums[cluster[i]] / static_cast<double>(sizes[cluster[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != cluster[i]) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    const double denom = std::max(a, b);
    scores[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return scores;
}

inline double silhouette(const LabeledVectorSet& set) {
  const std::vector<double> scores = silhouette_samples(set);
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

/// CSV with a label column; every other column must be numeric.
inline LabeledVectorSet load_labeled_vectors(std::istream& in,
                                             const std::string& label_column = "label") {
  csv::Reader reader(in);
  csv::Row header;
  if (!reader.next(header)) throw FormatError("vector CSV has no header row");
  const std::size_t label = csv::column_index(header, label_column);
  if (label == static_cast<std::size_t>(-1))
    throw FormatError("vector CSV is missing column '" + label_column + "'", 1);
  LabeledVectorSet set;
  csv::Row row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) throw FormatError("wrong field count", reader.line());
    std::vector<double> v;
    v.reserve(row.size() - 1);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == label) continue;
      double x = 0;
      const auto& cell = row[i];
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw FormatError("non-numeric value '" + cell + "' in column '" + header[i] + "'",
                          reader.line());
      v.push_back(x);
    }
    set.vectors.push_back(std::move(v));
    set.labels.push_back(row[label]);
  }
  return set;
}

}  // namespace ipastream
