// core/include/gsasv/rng.hpp

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

#ifndef GSASV_RNG_HPP
#define GSASV_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace gsasv {

// Deterministic generator. std::mt19937_64 has a fixed portable bit stream;
// the distribution transforms are written out here because the std::
// distribution objects are implementation-defined and would break the
// byte-identical reproducibility contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // 53-bit uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller with one cached draw.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Unbiased integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Fisher-Yates, high index downward.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(below(i + 1));
      using std::swap;
      swap(v[i], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Maps a base seed and a purpose label to an independent stream seed, so
// that adding or reordering consumers does not disturb unrelated streams.
std::uint64_t derive_seed(std::uint64_t base, std::string_view purpose);

}  // namespace gsasv

#endif  // GSASV_RNG_HPP
