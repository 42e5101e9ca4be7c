// core/src/metadata.cpp

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

#include "gsasv/metadata.hpp"

#include <algorithm>
#include <sstream>

#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"

namespace gsasv {

std::string attr_kind_name(AttrKind kind) {
  switch (kind) {
    case AttrKind::kAttack:
      return "attack";
    case AttrKind::kVocoder:
      return "vocoder";
    case AttrKind::kSynthesizer:
      return "synthesizer";
    case AttrKind::kWavegen:
      return "wavegen";
  }
  throw ConfigError("unknown attribute kind");
}

AttrKind attr_kind_from_name(const std::string& name) {
  if (name == "attack") return AttrKind::kAttack;
  if (name == "vocoder") return AttrKind::kVocoder;
  if (name == "synthesizer") return AttrKind::kSynthesizer;
  if (name == "wavegen") return AttrKind::kWavegen;
  throw ConfigError("unknown attribute kind '" + name +
                    "' (expected attack, vocoder, synthesizer or wavegen)");
}

const std::vector<AttrKind>& all_attr_kinds() {
  static const std::vector<AttrKind> kinds = {AttrKind::kAttack, AttrKind::kVocoder,
                                              AttrKind::kSynthesizer, AttrKind::kWavegen};
  return kinds;
}

const std::string& UtteranceRecord::attr_label(AttrKind k) const {
  switch (k) {
    case AttrKind::kAttack:
      return attack;
    case AttrKind::kVocoder:
      return vocoder;
    case AttrKind::kSynthesizer:
      return synthesizer;
    case AttrKind::kWavegen:
      return wavegen;
  }
  throw ConfigError("unknown attribute kind");
}

const UtteranceRecord& Metadata::record(const std::string& utt_id) const {
  auto it = index_.find(utt_id);
  if (it == index_.end()) throw DataError("no metadata record for utterance '" + utt_id + "'");
  return records[it->second];
}

bool Metadata::has_record(const std::string& utt_id) const { return index_.count(utt_id) != 0; }

const std::vector<std::string>& Metadata::vocab(AttrKind kind) const {
  auto it = vocabs.find(attr_kind_name(kind));
  if (it == vocabs.end()) {
    throw VocabError("no vocabulary declared for attribute kind '" + attr_kind_name(kind) + "'");
  }
  return it->second;
}

void Metadata::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!index_.emplace(records[i].utt_id, i).second) {
      throw DataError("duplicate utterance id '" + records[i].utt_id + "' in metadata");
    }
  }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string field_or_empty(const std::string& s) { return s == "-" ? std::string() : s; }

void check_label(const Metadata& meta, const UtteranceRecord& rec, AttrKind kind,
                 std::size_t line_no) {
  const std::string& label = rec.attr_label(kind);
  if (label.empty()) return;
  const std::string kind_name = attr_kind_name(kind);
  auto it = meta.vocabs.find(kind_name);
  if (it == meta.vocabs.end()) {
    throw VocabError("metadata line " + std::to_string(line_no) + ": label '" + label +
                     "' used but no '" + kind_name + "' vocabulary is declared");
  }
  if (std::find(it->second.begin(), it->second.end(), label) == it->second.end()) {
    throw VocabError("metadata line " + std::to_string(line_no) + ": label '" + label +
                     "' is not in the declared '" + kind_name + "' vocabulary");
  }
}

}  // namespace

Metadata read_metadata(const std::string& path) {
  const std::string text = read_file(path);
  Metadata meta;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line);
      std::string tag, kind_name, labels;
      hs >> tag >> kind_name;
      if (tag != "#vocab") continue;  // other comment
      std::getline(hs, labels);
      const std::size_t first = labels.find_first_not_of(" \t");
      labels = first == std::string::npos ? std::string() : labels.substr(first);
      attr_kind_from_name(kind_name);  // validates the kind
      std::vector<std::string> entries = split(labels, ',');
      entries.erase(std::remove(entries.begin(), entries.end(), std::string()), entries.end());
      if (entries.empty()) {
        throw FormatError(path + ": line " + std::to_string(line_no) + ": empty vocabulary for '" +
                          kind_name + "'");
      }
      for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
          if (entries[i] == entries[j]) {
            throw FormatError(path + ": line " + std::to_string(line_no) +
                              ": duplicate vocabulary label '" + entries[i] + "'");
          }
        }
      }
      if (!meta.vocabs.emplace(kind_name, std::move(entries)).second) {
        throw FormatError(path + ": line " + std::to_string(line_no) +
                          ": vocabulary for '" + kind_name + "' declared twice");
      }
      continue;
    }
    const std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 7) {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": expected 7 columns, got " +
                        std::to_string(cols.size()));
    }
    UtteranceRecord rec;
    rec.utt_id = cols[0];
    rec.speaker_id = cols[1];
    if (cols[2] == "bonafide") {
      rec.kind = UttKind::kBonafide;
    } else if (cols[2] == "spoof") {
      rec.kind = UttKind::kSpoof;
    } else {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": unknown kind '" + cols[2] +
                        "' (expected bonafide or spoof)");
    }
    rec.attack = field_or_empty(cols[3]);
    rec.vocoder = field_or_empty(cols[4]);
    rec.synthesizer = field_or_empty(cols[5]);
    rec.wavegen = field_or_empty(cols[6]);
    if (rec.utt_id.empty() || rec.speaker_id.empty()) {
      throw FormatError(path + ": line " + std::to_string(line_no) +
                        ": empty utterance or speaker id");
    }
    if (rec.kind == UttKind::kBonafide && !rec.attack.empty()) {
      throw FormatError(path + ": line " + std::to_string(line_no) +
                        ": bonafide utterance '" + rec.utt_id + "' carries an attack label");
    }
    if (rec.kind == UttKind::kSpoof && rec.attack.empty()) {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": spoof utterance '" +
                        rec.utt_id + "' has no attack label");
    }
    for (AttrKind kind : all_attr_kinds()) check_label(meta, rec, kind, line_no);
    meta.records.push_back(std::move(rec));
  }
  try {
    meta.rebuild_index();
  } catch (const DataError& e) {
    throw FormatError(path + ": " + e.what());
  }
  return meta;
}

void write_metadata(const Metadata& meta, const std::string& path) {
  std::ostringstream out;
  for (const auto& [kind_name, labels] : meta.vocabs) {
    out << "#vocab " << kind_name << ' ';
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) out << ',';
      out << labels[i];
    }
    out << '\n';
  }
  auto field = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
  for (const UtteranceRecord& r : meta.records) {
    out << r.utt_id << '\t' << r.speaker_id << '\t'
        << (r.kind == UttKind::kBonafide ? "bonafide" : "spoof") << '\t' << field(r.attack) << '\t'
        << field(r.vocoder) << '\t' << field(r.synthesizer) << '\t' << field(r.wavegen) << '\n';
  }
  atomic_write_file(path, out.str());
}

std::vector<double> encode_attribute(const UtteranceRecord& rec, AttrKind kind,
                                     const std::vector<std::string>& vocab) {
  std::vector<double> onehot(vocab.size() + 1, 0.0);
  if (rec.kind == UttKind::kBonafide) {
    onehot[0] = 1.0;
    return onehot;
  }
  const std::string& label = rec.attr_label(kind);
  if (label.empty()) {
    throw VocabError("spoof utterance '" + rec.utt_id + "' has no '" + attr_kind_name(kind) +
                     "' label");
  }
  const auto it = std::find(vocab.begin(), vocab.end(), label);
  if (it == vocab.end()) {
    throw VocabError("label '" + label + "' of utterance '" + rec.utt_id +
                     "' is not in the declared '" + attr_kind_name(kind) + "' vocabulary");
  }
  onehot[1 + static_cast<std::size_t>(it - vocab.begin())] = 1.0;
  return onehot;
}

}  // namespace gsasv
