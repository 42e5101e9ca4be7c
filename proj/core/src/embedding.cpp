// core/src/embedding.cpp

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

#include "gsasv/embedding.hpp"

#include <cmath>

#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"
#include "gsasv/version.hpp"

namespace gsasv {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'E', 'B'};

}  // namespace

const float* EmbeddingStore::vec(const std::string& utt_id) const {
  return vec_at(index_of(utt_id));
}

std::size_t EmbeddingStore::index_of(const std::string& utt_id) const {
  auto it = index_.find(utt_id);
  if (it == index_.end()) throw DataError("embedding not found for utterance '" + utt_id + "'");
  return it->second;
}

void EmbeddingStore::add(const std::string& utt_id, const std::vector<float>& values) {
  if (values.size() != dim_) {
    throw DataError("embedding '" + utt_id + "' has " + std::to_string(values.size()) +
                    " values, store dimension is " + std::to_string(dim_));
  }
  if (!index_.emplace(utt_id, ids_.size()).second) {
    throw DataError("duplicate utterance id '" + utt_id + "'");
  }
  ids_.push_back(utt_id);
  values_.insert(values_.end(), values.begin(), values.end());
}

void EmbeddingStore::add(const std::string& utt_id, const std::vector<double>& values) {
  std::vector<float> narrowed(values.begin(), values.end());
  add(utt_id, narrowed);
}

EmbeddingStore read_embeddings(const std::string& path) {
  const std::string bytes = read_file(path);
  ByteReader r(bytes, path);
  const std::string magic = r.get_bytes(4);
  if (magic != std::string(kMagic, 4)) {
    throw FormatError(path + ": bad magic (not an embedding file)");
  }
  const std::uint16_t version = r.get_u16();
  if (version != kEmbeddingFormatVersion) {
    throw FormatError(path + ": unsupported embedding format version " + std::to_string(version));
  }
  const std::uint32_t dim = r.get_u32();
  const std::uint32_t count = r.get_u32();
  if (dim == 0) throw FormatError(path + ": declared dimension is zero");
  EmbeddingStore store(dim);
  std::vector<float> values(dim);
  for (std::uint32_t rec = 0; rec < count; ++rec) {
    std::string id;
    try {
      const std::uint16_t id_len = r.get_u16();
      id = r.get_bytes(id_len);
      for (std::uint32_t j = 0; j < dim; ++j) values[j] = r.get_f32();
    } catch (const FormatError& e) {
      throw FormatError(path + ": record " + std::to_string(rec) + ": " + e.what());
    }
    for (std::uint32_t j = 0; j < dim; ++j) {
      if (!std::isfinite(values[j])) {
        throw FormatError(path + ": record " + std::to_string(rec) + " ('" + id +
                          "'): non-finite value at position " + std::to_string(j));
      }
    }
    try {
      store.add(id, values);
    } catch (const DataError& e) {
      throw FormatError(path + ": record " + std::to_string(rec) + ": " + e.what());
    }
  }
  if (r.remaining() != 4) {
    throw FormatError(path + ": trailing bytes after the last record");
  }
  const std::uint32_t declared = r.get_u32();
  const std::uint32_t actual = crc32(bytes.data(), bytes.size() - 4);
  if (declared != actual) throw FormatError(path + ": CRC-32 mismatch (file corrupt)");
  return store;
}

void write_embeddings(const EmbeddingStore& store, const std::string& path) {
  ByteWriter w;
  w.put_bytes(kMagic, 4);
  w.put_u16(kEmbeddingFormatVersion);
  w.put_u32(static_cast<std::uint32_t>(store.dim()));
  w.put_u32(static_cast<std::uint32_t>(store.count()));
  for (std::size_t i = 0; i < store.count(); ++i) {
    const std::string& id = store.ids()[i];
    if (id.size() > 0xFFFF) throw DataError("utterance id too long: '" + id + "'");
    w.put_u16(static_cast<std::uint16_t>(id.size()));
    w.put_string(id);
    const float* v = store.vec_at(i);
    for (std::size_t j = 0; j < store.dim(); ++j) w.put_f32(v[j]);
  }
  w.put_u32(crc32(w.buffer()));
  atomic_write_file(path, w.buffer());
}

}  // namespace gsasv
