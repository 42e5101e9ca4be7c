// core/include/gsasv/trials.hpp

// Copyright 2026  The gsasv authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GSASV_TRIALS_HPP
#define GSASV_TRIALS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gsasv/metadata.hpp"

namespace gsasv {

enum class TrialLabel { kTarget, kNontarget, kSpoof };

std::string label_name(TrialLabel label);
TrialLabel label_from_name(const std::string& name);

struct TrialPair {
  std::string enroll_id;
  std::string test_id;
  TrialLabel label = TrialLabel::kTarget;

  bool operator==(const TrialPair&) const = default;
};

enum class PairMode { kFull, kSampled };

struct TrialGenConfig {
  PairMode mode = PairMode::kFull;
  // Unordered pairing (enroll = lexicographically smaller id) by default;
  // ordered keeps both directions of every bonafide pair.
  bool ordered = false;
  std::size_t cap_target = 1000000;
  std::size_t cap_nontarget = 1000000;
  std::size_t cap_spoof = 1000000;
  std::uint64_t seed = 0;
};

// Pairing rules: target = bonafide same-speaker pairs; nontarget = bonafide
// cross-speaker pairs; spoof = every bonafide enrollment paired with every
// same-speaker spoof utterance. Sampled mode subsamples each class
// uniformly to its cap. Requires at least 2 speakers with bonafide
// utterances.
std::vector<TrialPair> generate_trials(const Metadata& meta, const TrialGenConfig& cfg);

struct TrialCounts {
  std::size_t target = 0;
  std::size_t nontarget = 0;
  std::size_t spoof = 0;
};

TrialCounts count_trials(const std::vector<TrialPair>& trials);

// Deterministic per-class split; the eval side receives
// round(fraction * class size) trials of each class.
struct TrialSplit {
  std::vector<TrialPair> train;
  std::vector<TrialPair> eval;
};

TrialSplit split_trials(const std::vector<TrialPair>& trials, double eval_fraction,
                        std::uint64_t seed);

// TSV rows "enroll_id TAB test_id TAB target|nontarget|spoof".
std::vector<TrialPair> read_trials(const std::string& path);
void write_trials(const std::vector<TrialPair>& trials, const std::string& path);

}  // namespace gsasv

#endif  // GSASV_TRIALS_HPP
