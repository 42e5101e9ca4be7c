// core/src/checkpoint.cpp

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

#include "gsasv/checkpoint.hpp"

#include <nlohmann/json.hpp>

#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"
#include "gsasv/version.hpp"

namespace gsasv {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'V', 'M'};

using json = nlohmann::json;

}  // namespace

std::string model_config_to_json(const ModelConfig& cfg) {
  json j;
  j["attr_classes"] = cfg.attr_classes;
  j["hidden_dims"] = cfg.hidden_dims;
  j["hps_append_projection"] = cfg.hps_append_projection;
  j["input_dim"] = cfg.input_dim;
  j["num_classes"] = cfg.num_classes;
  j["reg_target_dim"] = cfg.reg_target_dim;
  j["seed"] = cfg.seed;
  j["use_srelu"] = cfg.use_srelu;
  j["variant"] = variant_name(cfg.variant);
  return j.dump();
}

ModelConfig model_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model config is not valid JSON: ") + e.what());
  }
  ModelConfig cfg;
  try {
    cfg.attr_classes = j.at("attr_classes").get<std::size_t>();
    cfg.hidden_dims = j.at("hidden_dims").get<std::vector<std::size_t>>();
    cfg.hps_append_projection = j.at("hps_append_projection").get<bool>();
    cfg.input_dim = j.at("input_dim").get<std::size_t>();
    cfg.num_classes = j.at("num_classes").get<std::size_t>();
    cfg.reg_target_dim = j.at("reg_target_dim").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.use_srelu = j.at("use_srelu").get<bool>();
    cfg.variant = variant_from_name(j.at("variant").get<std::string>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("model config field error: ") + e.what());
  }
  return cfg;
}

void save_checkpoint(const Model& m, const std::string& path) {
  ByteWriter w;
  w.put_bytes(kMagic, 4);
  w.put_u16(kCheckpointFormatVersion);
  const std::string cfg_json = model_config_to_json(m.cfg);
  w.put_u32(static_cast<std::uint32_t>(cfg_json.size()));
  w.put_string(cfg_json);
  Model& mutable_m = const_cast<Model&>(m);  // views only; nothing is written
  for (const ParamRef& ref : stored_params(mutable_m)) {
    for (std::size_t i = 0; i < ref.size; ++i) w.put_f64(ref.data[i]);
  }
  const std::uint32_t crc = crc32(w.buffer());
  w.put_u32(crc);
  atomic_write_file(path, w.buffer());
}

Model load_checkpoint(const std::string& path, std::optional<Variant> expect_variant) {
  const std::string bytes = read_file(path);
  ByteReader r(bytes, path);
  const std::string magic = r.get_bytes(4);
  if (magic != std::string(kMagic, 4)) {
    throw FormatError(path + ": bad magic (not a model checkpoint)");
  }
  const std::uint16_t version = r.get_u16();
  if (version != kCheckpointFormatVersion) {
    throw FormatError(path + ": unsupported checkpoint format version " +
                      std::to_string(version));
  }
  const std::uint32_t cfg_len = r.get_u32();
  const std::string cfg_json = r.get_bytes(cfg_len);
  const ModelConfig cfg = model_config_from_json(cfg_json);
  validate(cfg);
  if (expect_variant && cfg.variant != *expect_variant) {
    throw ConfigError(path + ": checkpoint holds variant " + variant_name(cfg.variant) +
                      " but " + variant_name(*expect_variant) + " was requested");
  }
  Model m = build_model(cfg);
  for (const ParamRef& ref : stored_params(m)) {
    for (std::size_t i = 0; i < ref.size; ++i) ref.data[i] = r.get_f64();
  }
  if (r.remaining() != 4) {
    throw FormatError(path + ": trailing bytes after parameter blob");
  }
  const std::uint32_t declared = r.get_u32();
  const std::uint32_t actual = crc32(bytes.data(), bytes.size() - 4);
  if (declared != actual) {
    throw FormatError(path + ": CRC-32 mismatch (file corrupt)");
  }
  return m;
}

}  // namespace gsasv
