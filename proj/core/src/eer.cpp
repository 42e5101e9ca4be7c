// core/src/eer.cpp

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

#include "gsasv/eer.hpp"

#include <algorithm>
#include <cmath>

#include "gsasv/errors.hpp"

namespace gsasv {

namespace {

void check_scores(const std::vector<double>& positives, const std::vector<double>& negatives) {
  if (positives.empty()) throw EvalError("no positive scores");
  if (negatives.empty()) throw EvalError("no negative scores");
  for (double s : positives) {
    if (!std::isfinite(s)) throw EvalError("non-finite positive score");
  }
  for (double s : negatives) {
    if (!std::isfinite(s)) throw EvalError("non-finite negative score");
  }
}

std::vector<double> candidate_thresholds(const std::vector<double>& pos_sorted,
                                         const std::vector<double>& neg_sorted) {
  std::vector<double> all;
  all.reserve(pos_sorted.size() + neg_sorted.size());
  std::merge(pos_sorted.begin(), pos_sorted.end(), neg_sorted.begin(), neg_sorted.end(),
             std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<double> thresholds;
  thresholds.reserve(all.size() + 1);
  thresholds.push_back(all.front() - 1.0);
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    thresholds.push_back(0.5 * (all[i] + all[i + 1]));
  }
  thresholds.push_back(all.back() + 1.0);
  return thresholds;
}

// FAR(t) = #{neg >= t} / N and FRR(t) = #{pos < t} / P, walked with two
// monotone cursors over the ascending threshold grid.
std::vector<DetPoint> trace(const std::vector<double>& pos_sorted,
                            const std::vector<double>& neg_sorted,
                            const std::vector<double>& thresholds) {
  const double p = static_cast<double>(pos_sorted.size());
  const double n = static_cast<double>(neg_sorted.size());
  std::vector<DetPoint> points;
  points.reserve(thresholds.size());
  std::size_t pos_below = 0;
  std::size_t neg_below = 0;
  for (double t : thresholds) {
    while (pos_below < pos_sorted.size() && pos_sorted[pos_below] < t) ++pos_below;
    while (neg_below < neg_sorted.size() && neg_sorted[neg_below] < t) ++neg_below;
    DetPoint pt;
    pt.threshold = t;
    pt.far = static_cast<double>(neg_sorted.size() - neg_below) / n;
    pt.frr = static_cast<double>(pos_below) / p;
    points.push_back(pt);
  }
  return points;
}

}  // namespace

std::vector<DetPoint> det_points(const std::vector<double>& positives,
                                 const std::vector<double>& negatives) {
  check_scores(positives, negatives);
  std::vector<double> pos = positives;
  std::vector<double> neg = negatives;
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  return trace(pos, neg, candidate_thresholds(pos, neg));
}

EerResult compute_eer(const std::vector<double>& positives, const std::vector<double>& negatives) {
  const std::vector<DetPoint> points = det_points(positives, negatives);
  // FAR - FRR runs from 1 at the low extreme to -1 at the high extreme and
  // never increases, so a sign change exists.
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double di = points[i].far - points[i].frr;
    const double dj = points[i + 1].far - points[i + 1].frr;
    if (di < 0.0 || dj > 0.0) continue;
    const double denom = di - dj;
    const double t = denom > 0.0 ? di / denom : 0.0;
    EerResult r;
    r.eer = (points[i].far + t * (points[i + 1].far - points[i].far)) * 100.0;
    r.threshold = points[i].threshold + t * (points[i + 1].threshold - points[i].threshold);
    return r;
  }
  throw EvalError("no FAR/FRR crossing found");
}

}  // namespace gsasv
