// core/include/gsasv/version.hpp

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

#ifndef GSASV_VERSION_HPP
#define GSASV_VERSION_HPP

#include <cstdint>

namespace gsasv {

inline constexpr const char* kVersionString = "0.1.0";
inline constexpr std::uint16_t kCheckpointFormatVersion = 1;
inline constexpr std::uint16_t kEmbeddingFormatVersion = 1;

}  // namespace gsasv

#endif  // GSASV_VERSION_HPP
