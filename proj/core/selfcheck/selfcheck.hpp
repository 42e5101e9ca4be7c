// core/selfcheck/selfcheck.hpp

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

#ifndef GSASV_SELFCHECK_HPP
#define GSASV_SELFCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gsasv/eer.hpp"
#include "gsasv/metadata.hpp"
#include "gsasv/trials.hpp"

namespace gsasv::selfcheck {

// Independent cross-checks of the library's numerics. These reimplement
// results the slow, obvious way and never share code paths with the
// implementations they verify.

// Naive equal error rate: every midpoint threshold evaluated by direct
// counting, crossing resolved by linear interpolation.
EerResult eer_bruteforce(const std::vector<double>& positives,
                         const std::vector<double>& negatives);

// O(n^2) scan applying the pairing rules record by record. Output sorted
// by (label, enroll_id, test_id).
std::vector<TrialPair> enumerate_trials_bruteforce(const Metadata& meta, bool ordered);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

// Finite-difference gradient checks: every layer primitive, every loss,
// and every model variant with ReLU and sReLU activations, 10 random
// non-degenerate points each.
std::vector<CheckResult> run_gradient_checks(std::uint64_t seed);

// compute_eer against eer_bruteforce on random score lists, plus exact
// rank invariance under increasing affine transforms.
std::vector<CheckResult> run_eer_checks(std::uint64_t seed, std::size_t instances);

}  // namespace gsasv::selfcheck

#endif  // GSASV_SELFCHECK_HPP
