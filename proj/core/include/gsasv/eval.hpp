// core/include/gsasv/eval.hpp

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

#ifndef GSASV_EVAL_HPP
#define GSASV_EVAL_HPP

#include <string>
#include <vector>

#include "gsasv/eer.hpp"
#include "gsasv/trials.hpp"

namespace gsasv {

struct EvalEntry {
  bool defined = false;
  double eer = 0.0;  // percent
  double threshold = 0.0;
};

struct EvalCounts {
  std::size_t n_target = 0;
  std::size_t n_nontarget = 0;
  std::size_t n_spoof = 0;
};

// Three equal error rates over one score list: positives are always the
// target trials; the negative set is nontarget + spoof (joint), nontarget
// only (bonafide), or spoof only (spoof). An absent negative class leaves
// that entry undefined.
struct EvalReport {
  EvalEntry joint;
  EvalEntry bonafide;
  EvalEntry spoof;
  EvalCounts counts;
  double alpha = 0.95;
};

EvalReport evaluate_scores(const std::vector<TrialPair>& trials,
                           const std::vector<double>& scores, double alpha);

// Canonical JSON, keys sorted, stable across runs for identical inputs.
std::string eval_report_to_json(const EvalReport& r);

struct ScoredTrial {
  TrialPair trial;
  double score = 0.0;
};

// Score file: "enroll TAB test TAB label TAB score", score with 6 fractional
// digits.
std::string scores_to_tsv(const std::vector<TrialPair>& trials, const std::vector<double>& scores);
void write_scores(const std::vector<TrialPair>& trials, const std::vector<double>& scores,
                  const std::string& path);
std::vector<ScoredTrial> read_scores(const std::string& path);

// DET coordinates of the joint task: "threshold TAB far TAB frr".
std::vector<DetPoint> joint_det(const std::vector<TrialPair>& trials,
                                const std::vector<double>& scores);
std::string det_to_tsv(const std::vector<DetPoint>& points);

}  // namespace gsasv

#endif  // GSASV_EVAL_HPP
