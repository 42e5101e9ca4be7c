// core/include/gsasv/embedding.hpp

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

#ifndef GSASV_EMBEDDING_HPP
#define GSASV_EMBEDDING_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace gsasv {

// Named fixed-dimension vectors. Values are held in 32-bit precision, the
// storage width of the file format; arithmetic widens to double on use.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  bool contains(const std::string& utt_id) const { return index_.count(utt_id) != 0; }

  // Throws DataError naming the id when absent.
  const float* vec(const std::string& utt_id) const;
  const float* vec_at(std::size_t i) const { return values_.data() + i * dim_; }
  std::size_t index_of(const std::string& utt_id) const;

  // Throws DataError on duplicate id or dimension mismatch.
  void add(const std::string& utt_id, const std::vector<float>& values);
  void add(const std::string& utt_id, const std::vector<double>& values);

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> values_;
};

// Embedding file: magic "GSEB", u16 format version, u32 dim, u32 count,
// records [u16 id length, id bytes, dim x f32 little-endian], u32 CRC-32
// over everything before it.
EmbeddingStore read_embeddings(const std::string& path);
void write_embeddings(const EmbeddingStore& store, const std::string& path);

}  // namespace gsasv

#endif  // GSASV_EMBEDDING_HPP
