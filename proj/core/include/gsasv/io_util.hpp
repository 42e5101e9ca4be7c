// core/include/gsasv/io_util.hpp

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

#ifndef GSASV_IO_UTIL_HPP
#define GSASV_IO_UTIL_HPP

#include <cstdint>
#include <string>

namespace gsasv {

// CRC-32 (IEEE 802.3, reflected polynomial 0xEDB88320). `crc` carries state
// across incremental calls; start from 0.
std::uint32_t crc32(const void* data, std::size_t n, std::uint32_t crc = 0);
std::uint32_t crc32(const std::string& data, std::uint32_t crc = 0);

// Little-endian byte packing, independent of host representation.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v);
  void put_u16(std::uint16_t v);
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_f32(float v);
  void put_f64(double v);
  void put_bytes(const void* data, std::size_t n);
  void put_string(const std::string& s) { put_bytes(s.data(), s.size()); }

  const std::string& buffer() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

// Bounds-checked reads; truncation raises FormatError naming the source.
class ByteReader {
 public:
  ByteReader(const std::string& data, std::string source)
      : data_(data), source_(std::move(source)) {}

  std::uint8_t get_u8();
  std::uint16_t get_u16();
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  float get_f32();
  double get_f64();
  std::string get_bytes(std::size_t n);

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }
  const std::string& source() const { return source_; }

 private:
  void require(std::size_t n);
  const std::string& data_;
  std::string source_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path);

// Writes through a temporary file in the same directory, then renames, so
// readers never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& contents);

// Fixed 6-fractional-digit rendering used by all score and table outputs.
std::string format_fixed6(double v);

}  // namespace gsasv

#endif  // GSASV_IO_UTIL_HPP
