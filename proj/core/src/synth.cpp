// core/src/synth.cpp

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

#include "gsasv/synth.hpp"

#include <cstdio>
#include <string>
#include <vector>

#include "gsasv/errors.hpp"
#include "gsasv/rng.hpp"

namespace gsasv {

void validate(const SynthConfig& cfg) {
  if (cfg.n_speakers < 2) throw ConfigError("synth: need at least 2 speakers");
  if (cfg.utts_per_speaker == 0) throw ConfigError("synth: utts_per_speaker must be positive");
  if (cfg.asv_dim == 0 || cfg.cm_dim == 0) throw ConfigError("synth: dimensions must be positive");
  if (cfg.n_attacks > 0 && cfg.spoofs_per_speaker_per_attack == 0) {
    throw ConfigError("synth: spoofs_per_speaker_per_attack must be positive when attacks exist");
  }
  if (cfg.n_attacks > 0 &&
      (cfg.n_vocoders == 0 || cfg.n_synthesizers == 0 || cfg.n_wavegens == 0)) {
    throw ConfigError("synth: attribute vocabulary sizes must be positive when attacks exist");
  }
  if (cfg.speaker_scale <= 0.0 || cfg.attack_scale <= 0.0) {
    throw ConfigError("synth: scales must be positive");
  }
  if (cfg.noise_sigma < 0.0) throw ConfigError("synth: noise_sigma must be non-negative");
}

SynthConfig separable_preset() { return SynthConfig{}; }

namespace {

std::string zpad(std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, value);
  return buf;
}

std::vector<double> draw_vec(Rng& rng, std::size_t dim, double scale) {
  std::vector<double> v(dim);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

std::vector<double> noisy(const std::vector<double>& mean, double sigma, Rng& rng) {
  std::vector<double> v(mean.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mean[i] + sigma * rng.normal();
  return v;
}

std::vector<double> sum3(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return v;
}

std::vector<std::string> label_set(const char* prefix, std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) labels.push_back(prefix + zpad(i, 2));
  return labels;
}

}  // namespace

SynthOutput synth_generate(const SynthConfig& cfg) {
  validate(cfg);
  SynthOutput out;
  out.asv = EmbeddingStore(cfg.asv_dim);
  out.cm = EmbeddingStore(cfg.cm_dim);

  Rng proto_rng(derive_seed(cfg.seed, "synth-prototypes"));
  Rng utt_rng(derive_seed(cfg.seed, "synth-utterances"));

  std::vector<std::vector<double>> speaker_means;
  for (std::size_t s = 0; s < cfg.n_speakers; ++s) {
    speaker_means.push_back(draw_vec(proto_rng, cfg.asv_dim, cfg.speaker_scale));
  }
  std::vector<std::vector<double>> attack_offsets;
  std::vector<std::vector<double>> cm_attack_protos;
  for (std::size_t a = 0; a < cfg.n_attacks; ++a) {
    attack_offsets.push_back(draw_vec(proto_rng, cfg.asv_dim, cfg.attack_scale));
    cm_attack_protos.push_back(draw_vec(proto_rng, cfg.cm_dim, cfg.attack_scale));
  }
  const std::vector<double> cm_bonafide_proto = draw_vec(proto_rng, cfg.cm_dim, cfg.attack_scale);

  const std::vector<std::string> attacks = label_set("A", cfg.n_attacks);
  const std::vector<std::string> vocoders = label_set("V", cfg.n_vocoders);
  const std::vector<std::string> synthesizers = label_set("S", cfg.n_synthesizers);
  const std::vector<std::string> wavegens = label_set("W", cfg.n_wavegens);
  if (cfg.n_attacks > 0) {
    out.meta.vocabs["attack"] = attacks;
    out.meta.vocabs["vocoder"] = vocoders;
    out.meta.vocabs["synthesizer"] = synthesizers;
    out.meta.vocabs["wavegen"] = wavegens;
  }

  for (std::size_t s = 0; s < cfg.n_speakers; ++s) {
    const std::string spk = "spk" + zpad(s + 1, 3);
    for (std::size_t u = 0; u < cfg.utts_per_speaker; ++u) {
      UtteranceRecord rec;
      rec.utt_id = spk + "-b" + zpad(u + 1, 4);
      rec.speaker_id = spk;
      rec.kind = UttKind::kBonafide;
      out.asv.add(rec.utt_id, noisy(speaker_means[s], cfg.noise_sigma, utt_rng));
      out.cm.add(rec.utt_id, noisy(cm_bonafide_proto, cfg.noise_sigma, utt_rng));
      out.meta.records.push_back(std::move(rec));
    }
    for (std::size_t a = 0; a < cfg.n_attacks; ++a) {
      const std::vector<double> spoof_mean = sum3(speaker_means[s], attack_offsets[a]);
      for (std::size_t k = 0; k < cfg.spoofs_per_speaker_per_attack; ++k) {
        UtteranceRecord rec;
        rec.utt_id = spk + "-" + attacks[a] + "-s" + zpad(k + 1, 4);
        rec.speaker_id = spk;
        rec.kind = UttKind::kSpoof;
        rec.attack = attacks[a];
        rec.vocoder = vocoders[a % cfg.n_vocoders];
        rec.synthesizer = synthesizers[a % cfg.n_synthesizers];
        rec.wavegen = wavegens[a % cfg.n_wavegens];
        out.asv.add(rec.utt_id, noisy(spoof_mean, cfg.noise_sigma, utt_rng));
        out.cm.add(rec.utt_id, noisy(cm_attack_protos[a], cfg.noise_sigma, utt_rng));
        out.meta.records.push_back(std::move(rec));
      }
    }
  }
  out.meta.rebuild_index();
  return out;
}

}  // namespace gsasv
