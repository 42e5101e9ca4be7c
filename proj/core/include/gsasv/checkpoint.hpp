// core/include/gsasv/checkpoint.hpp

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

#ifndef GSASV_CHECKPOINT_HPP
#define GSASV_CHECKPOINT_HPP

#include <optional>
#include <string>

#include "gsasv/model.hpp"

namespace gsasv {

// Checkpoint file: magic "GSVM", u16 format version, u32 config length,
// canonical-JSON config, all stored parameter blocks as little-endian f64 in
// the canonical block order, u32 CRC-32 over everything before it.
// Round-trips are bit-exact.
void save_checkpoint(const Model& m, const std::string& path);

// expect_variant guards against loading a checkpoint into an experiment
// declared for a different variant.
Model load_checkpoint(const std::string& path, std::optional<Variant> expect_variant = {});

std::string model_config_to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const std::string& json_text);

}  // namespace gsasv

#endif  // GSASV_CHECKPOINT_HPP
