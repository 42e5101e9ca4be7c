// core/include/gsasv/metadata.hpp

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

#ifndef GSASV_METADATA_HPP
#define GSASV_METADATA_HPP

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace gsasv {

enum class UttKind { kBonafide, kSpoof };

enum class AttrKind { kAttack, kVocoder, kSynthesizer, kWavegen };

std::string attr_kind_name(AttrKind kind);
AttrKind attr_kind_from_name(const std::string& name);
const std::vector<AttrKind>& all_attr_kinds();

struct UtteranceRecord {
  std::string utt_id;
  std::string speaker_id;
  UttKind kind = UttKind::kBonafide;
  // Empty string means "none"; bonafide records carry no attribute labels.
  std::string attack;
  std::string vocoder;
  std::string synthesizer;
  std::string wavegen;

  const std::string& attr_label(AttrKind k) const;
};

struct Metadata {
  std::vector<UtteranceRecord> records;
  // Attribute kind name -> closed label vocabulary, in declared order.
  std::map<std::string, std::vector<std::string>> vocabs;

  const UtteranceRecord& record(const std::string& utt_id) const;
  bool has_record(const std::string& utt_id) const;
  const std::vector<std::string>& vocab(AttrKind kind) const;
  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

// UTF-8 TSV. Header lines "#vocab <kind> <comma-separated labels>"; rows
// "utt_id TAB speaker_id TAB bonafide|spoof TAB attack TAB vocoder TAB
// synthesizer TAB wavegen" with "-" for none.
Metadata read_metadata(const std::string& path);
void write_metadata(const Metadata& meta, const std::string& path);

// One-hot of dimension |vocab| + 1: index 0 is the bonafide class, indices
// 1..N follow the vocabulary order.
std::vector<double> encode_attribute(const UtteranceRecord& rec, AttrKind kind,
                                     const std::vector<std::string>& vocab);

}  // namespace gsasv

#endif  // GSASV_METADATA_HPP
