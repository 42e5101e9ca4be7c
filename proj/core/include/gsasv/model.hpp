// core/include/gsasv/model.hpp

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

#ifndef GSASV_MODEL_HPP
#define GSASV_MODEL_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gsasv/grad_check.hpp"
#include "gsasv/layers.hpp"
#include "gsasv/matrix.hpp"

namespace gsasv {

enum class Variant { kBase, kSps, kHps, kSpsAttr, kHpsAttr };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

bool variant_has_reg(Variant v);
bool variant_has_attr(Variant v);
// HPS and HPS-ATTR keep their own regression stack; the SPS variants share
// the main hidden layers and own only their heads.
bool variant_has_own_reg_stack(Variant v);

struct ModelConfig {
  std::size_t input_dim = 512;
  std::vector<std::size_t> hidden_dims = {256, 256};
  std::size_t num_classes = 3;
  Variant variant = Variant::kBase;
  bool use_srelu = false;
  std::size_t reg_target_dim = 0;  // required for non-BASE variants
  std::size_t attr_classes = 0;    // required for the *-ATTR variants
  // HPS appends the regression stack's final hidden activation to the main
  // input by default; with hps_append_projection the predicted regression
  // output is appended instead.
  bool hps_append_projection = false;
  std::uint64_t seed = 0;

  bool operator==(const ModelConfig&) const = default;
};

void validate(const ModelConfig& cfg);

// affine -> relu/srelu -> batchnorm
struct HiddenLayer {
  AffineParams fc;
  bool use_srelu = false;
  SReluParams srelu;
  BatchNormParams bn;
};

struct Model {
  ModelConfig cfg;
  std::vector<HiddenLayer> main_hidden;
  AffineParams class_head;
  std::vector<HiddenLayer> reg_hidden;  // own stack, HPS variants only
  AffineParams reg_head;                // non-BASE
  AffineParams attr_head;               // *-ATTR

  bool has_reg() const { return variant_has_reg(cfg.variant); }
  bool has_attr() const { return variant_has_attr(cfg.variant); }
  bool has_own_reg_stack() const { return variant_has_own_reg_stack(cfg.variant); }
};

Model build_model(const ModelConfig& cfg);

// The width of the main branch's first affine input: input_dim, plus the
// appended regression feature for the HPS variants.
std::size_t main_input_dim(const ModelConfig& cfg);

struct ForwardOutput {
  Matrix log_posteriors;  // batch x 3
  Matrix reg_prediction;  // batch x reg_target_dim, empty for BASE
  Matrix attr_log_probs;  // batch x attr_classes, empty unless *-ATTR
};

struct StackCache {
  std::vector<Matrix> x_in;  // input of each hidden layer
  std::vector<Matrix> z;     // affine outputs
  std::vector<Matrix> a;     // activation outputs (batchnorm inputs)
  std::vector<BatchNormCache> bn;
};

struct ForwardCache {
  StackCache main;
  StackCache reg;
  Matrix main_input;   // x, or [x, appended] for HPS
  Matrix class_in;     // main final hidden
  Matrix logp;
  Matrix reg_in;       // input of the regression head
  Matrix attr_logp;
};

// Train mode: batchnorm uses batch statistics. update_running=false leaves
// the running estimates untouched (for finite-difference probes).
ForwardOutput forward_train(Model& m, const Matrix& x, ForwardCache& cache,
                            bool update_running = true);
// Eval mode: pure function, safe for concurrent calls.
ForwardOutput forward_eval(const Model& m, const Matrix& x);

struct AffineGrads {
  Matrix dW;
  std::vector<double> db;
};

struct HiddenGrads {
  AffineGrads fc;
  std::vector<double> dwa;
  std::vector<double> dgamma;
  std::vector<double> dbeta;
};

struct GradBuffers {
  std::vector<HiddenGrads> main_hidden;
  AffineGrads class_head;
  std::vector<HiddenGrads> reg_hidden;
  AffineGrads reg_head;
  AffineGrads attr_head;
};

GradBuffers make_grad_buffers(const Model& m);
void zero_grads(GradBuffers& g);

// Reverse pass from head-output gradients: dlogp w.r.t. the main-branch
// log-posteriors, dreg w.r.t. the regression prediction, dattr w.r.t. the
// attribute log-probabilities (null when a head is absent or unweighted).
// Accumulates parameter gradients into g.
void backward(const Model& m, const ForwardCache& cache, const Matrix& dlogp, const Matrix* dreg,
              const Matrix* dattr, GradBuffers& g);

// Parameter groups for selective adaptation. FC, BN and SRELU cover the
// main branch (class head included in FC); REG_BRANCH covers the regression
// stack and head; ATTR_HEAD the attribute head. NETWORK = FC + BN.
enum class ParamGroup { kFc, kBn, kSrelu, kRegBranch, kAttrHead };

std::string param_group_name(ParamGroup g);

struct ParamRef {
  std::string name;
  ParamGroup group;
  double* data = nullptr;
  std::size_t size = 0;
};

// Canonical ordering of all trainable parameter blocks; the single source
// of order for the optimizer, checkpoints, and group selection.
std::vector<ParamRef> trainable_params(Model& m);
// Same order with the batchnorm running statistics inserted after each
// gamma/beta pair; the checkpoint blob layout.
std::vector<ParamRef> stored_params(Model& m);

std::vector<ParamRef> trainable_grads(GradBuffers& g, const Model& m);

std::size_t trainable_count(const Model& m);

// Group names: NETWORK, FC, BN, SRELU, REG_BRANCH, ATTR_HEAD. NETWORK is
// the FC + BN alias. Unknown names or groups absent from the model raise
// ConfigError.
std::vector<ParamRef> select_params(Model& m, const std::set<std::string>& groups);
std::vector<ParamRef> select_grads(GradBuffers& g, const Model& m,
                                   const std::set<std::string>& groups);

// Inserts identity-initialized sReLU scalers into the main hidden layers.
void insert_srelu(Model& m);

}  // namespace gsasv

#endif  // GSASV_MODEL_HPP
