// core/include/gsasv/eer.hpp

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

#ifndef GSASV_EER_HPP
#define GSASV_EER_HPP

#include <vector>

namespace gsasv {

struct EerResult {
  double eer = 0.0;  // percent
  double threshold = 0.0;
};

// Equal error rate under the convention accept <=> score >= threshold.
// Candidate thresholds are the midpoints between adjacent distinct scores
// plus one point below the minimum and one above the maximum; the FAR/FRR
// crossing is located on that grid and resolved by linear interpolation.
// EER depends only on score ranks, so it is invariant under any strictly
// increasing transform of all scores.
EerResult compute_eer(const std::vector<double>& positives, const std::vector<double>& negatives);

struct DetPoint {
  double threshold = 0.0;
  double far = 0.0;  // fraction, not percent
  double frr = 0.0;
};

// One point per candidate threshold, thresholds ascending.
std::vector<DetPoint> det_points(const std::vector<double>& positives,
                                 const std::vector<double>& negatives);

}  // namespace gsasv

#endif  // GSASV_EER_HPP
