// core/include/gsasv/scoring.hpp

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

#ifndef GSASV_SCORING_HPP
#define GSASV_SCORING_HPP

#include <cstddef>
#include <vector>

#include "gsasv/embedding.hpp"
#include "gsasv/model.hpp"
#include "gsasv/trials.hpp"

namespace gsasv {

struct PosteriorTriple {
  double theta_tar = 0.0;
  double theta_non = 0.0;
  double theta_spf = 0.0;
};

struct ScoringConfig {
  double alpha = 0.95;   // weight of the non-target posterior in the denominator
  double floor = 1e-30;  // applied to numerator and denominator before the log
};

void validate(const ScoringConfig& cfg);

// log(theta_tar / (alpha * theta_non + (1 - alpha) * theta_spf)), floored.
double llr_score(const PosteriorTriple& p, const ScoringConfig& cfg = {});

// dot(e, t) / max(|e| * |t|, 1e-8)
double cosine_score(const double* e, const double* t, std::size_t dim);
double cosine_score(const std::vector<double>& e, const std::vector<double>& t);

// Posteriors for every trial, eval-mode forward over [enroll, test] rows.
// Each row is computed independently, so the result is identical for any
// thread count or batch partition.
std::vector<PosteriorTriple> score_posteriors(const Model& m, const std::vector<TrialPair>& trials,
                                              const EmbeddingStore& asv,
                                              std::size_t n_threads = 1);

std::vector<double> llr_scores(const std::vector<PosteriorTriple>& posteriors,
                               const ScoringConfig& cfg = {});

// Embedding-space baseline: cosine similarity of the two ASV embeddings.
std::vector<double> cosine_scores(const std::vector<TrialPair>& trials,
                                  const EmbeddingStore& asv);

}  // namespace gsasv

#endif  // GSASV_SCORING_HPP
