// core/include/gsasv/synth.hpp

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

#ifndef GSASV_SYNTH_HPP
#define GSASV_SYNTH_HPP

#include <cstdint>

#include "gsasv/embedding.hpp"
#include "gsasv/metadata.hpp"

namespace gsasv {

// Desk-scale synthetic data. Speakers are Gaussian clusters in the speaker
// embedding space; each attack adds a shared offset there and owns a
// prototype in the spoof embedding space. Attribute labels are assigned to
// attacks deterministically, so all four attribute kinds are derivable.
struct SynthConfig {
  std::size_t n_speakers = 10;
  std::size_t utts_per_speaker = 20;
  std::size_t n_attacks = 6;
  std::size_t spoofs_per_speaker_per_attack = 12;
  std::size_t asv_dim = 256;
  std::size_t cm_dim = 160;
  // Declared vocabulary sizes; attacks map onto them cyclically.
  std::size_t n_vocoders = 9;
  std::size_t n_synthesizers = 11;
  std::size_t n_wavegens = 9;
  double speaker_scale = 1.0;
  double attack_scale = 1.0;
  double noise_sigma = 0.05;
  std::uint64_t seed = 1;
};

void validate(const SynthConfig& cfg);

// The defaults above; the fixed configuration used by the end-to-end
// separability checks.
SynthConfig separable_preset();

struct SynthOutput {
  EmbeddingStore asv;
  EmbeddingStore cm;
  Metadata meta;
};

SynthOutput synth_generate(const SynthConfig& cfg);

}  // namespace gsasv

#endif  // GSASV_SYNTH_HPP
