// core/src/model.cpp

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

#include "gsasv/model.hpp"

#include <cmath>
#include <type_traits>
#include <utility>

#include "gsasv/errors.hpp"
#include "gsasv/rng.hpp"

namespace gsasv {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kBase:
      return "BASE";
    case Variant::kSps:
      return "SPS";
    case Variant::kHps:
      return "HPS";
    case Variant::kSpsAttr:
      return "SPS-ATTR";
    case Variant::kHpsAttr:
      return "HPS-ATTR";
  }
  throw ConfigError("unknown variant tag");
}

Variant variant_from_name(const std::string& name) {
  if (name == "BASE") return Variant::kBase;
  if (name == "SPS") return Variant::kSps;
  if (name == "HPS") return Variant::kHps;
  if (name == "SPS-ATTR") return Variant::kSpsAttr;
  if (name == "HPS-ATTR") return Variant::kHpsAttr;
  throw ConfigError("unknown model variant '" + name +
                    "' (expected BASE, SPS, HPS, SPS-ATTR or HPS-ATTR)");
}

bool variant_has_reg(Variant v) { return v != Variant::kBase; }

bool variant_has_attr(Variant v) {
  return v == Variant::kSpsAttr || v == Variant::kHpsAttr;
}

bool variant_has_own_reg_stack(Variant v) {
  return v == Variant::kHps || v == Variant::kHpsAttr;
}

void validate(const ModelConfig& cfg) {
  if (cfg.num_classes != 3) {
    throw ConfigError("num_classes is fixed at 3, got " + std::to_string(cfg.num_classes));
  }
  if (cfg.input_dim == 0) throw ConfigError("input_dim must be positive");
  if (cfg.hidden_dims.empty()) throw ConfigError("hidden_dims must not be empty");
  for (std::size_t d : cfg.hidden_dims) {
    if (d == 0) throw ConfigError("hidden_dims entries must be positive");
  }
  if (variant_has_reg(cfg.variant) && cfg.reg_target_dim == 0) {
    throw ConfigError("variant " + variant_name(cfg.variant) + " requires reg_target_dim");
  }
  if (variant_has_attr(cfg.variant) && cfg.attr_classes < 2) {
    throw ConfigError("variant " + variant_name(cfg.variant) +
                      " requires attr_classes >= 2, got " + std::to_string(cfg.attr_classes));
  }
}

std::size_t main_input_dim(const ModelConfig& cfg) {
  if (!variant_has_own_reg_stack(cfg.variant)) return cfg.input_dim;
  return cfg.input_dim +
         (cfg.hps_append_projection ? cfg.reg_target_dim : cfg.hidden_dims.back());
}

namespace {

AffineParams init_affine(std::size_t out, std::size_t in, Rng& rng) {
  AffineParams p;
  p.W = Matrix(out, in);
  p.b.assign(out, 0.0);
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  double* w = p.W.data();
  for (std::size_t i = 0; i < p.W.size(); ++i) w[i] = rng.uniform(-bound, bound);
  return p;
}

BatchNormParams init_batchnorm(std::size_t dim) {
  BatchNormParams p;
  p.gamma.assign(dim, 1.0);
  p.beta.assign(dim, 0.0);
  p.running_mean.assign(dim, 0.0);
  p.running_var.assign(dim, 1.0);
  return p;
}

HiddenLayer init_hidden(std::size_t out, std::size_t in, bool use_srelu, Rng& rng) {
  HiddenLayer l;
  l.fc = init_affine(out, in, rng);
  l.use_srelu = use_srelu;
  if (use_srelu) l.srelu.wa_diag.assign(out, 1.0);
  l.bn = init_batchnorm(out);
  return l;
}

Matrix run_stack_train(std::vector<HiddenLayer>& layers, const Matrix& x, StackCache& c,
                       bool update_running) {
  c.x_in.clear();
  c.z.clear();
  c.a.clear();
  c.bn.assign(layers.size(), BatchNormCache{});
  Matrix h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    HiddenLayer& l = layers[i];
    Matrix z = affine_forward(l.fc, h);
    Matrix a = l.use_srelu ? srelu_forward(l.srelu, z) : relu_forward(z);
    Matrix y = batchnorm_forward_train(l.bn, a, c.bn[i], update_running);
    c.x_in.push_back(std::move(h));
    c.z.push_back(std::move(z));
    c.a.push_back(std::move(a));
    h = std::move(y);
  }
  return h;
}

Matrix run_stack_eval(const std::vector<HiddenLayer>& layers, const Matrix& x) {
  Matrix h = x;
  for (const HiddenLayer& l : layers) {
    Matrix z = affine_forward(l.fc, h);
    Matrix a = l.use_srelu ? srelu_forward(l.srelu, z) : relu_forward(z);
    h = batchnorm_forward_eval(l.bn, a);
  }
  return h;
}

Matrix stack_backward(const std::vector<HiddenLayer>& layers, const StackCache& c,
                      const Matrix& d_out, std::vector<HiddenGrads>& g) {
  Matrix d = d_out;
  for (std::size_t idx = layers.size(); idx-- > 0;) {
    const HiddenLayer& l = layers[idx];
    Matrix da = batchnorm_backward(l.bn, c.bn[idx], d, g[idx].dgamma, g[idx].dbeta);
    Matrix dz = l.use_srelu ? srelu_backward(l.srelu, c.z[idx], da, g[idx].dwa)
                            : relu_backward(c.z[idx], da);
    d = affine_backward(l.fc, c.x_in[idx], dz, g[idx].fc.dW, g[idx].fc.db);
  }
  return d;
}

AffineGrads make_affine_grads(const AffineParams& p) {
  AffineGrads g;
  g.dW = Matrix(p.out_dim(), p.in_dim());
  g.db.assign(p.out_dim(), 0.0);
  return g;
}

HiddenGrads make_hidden_grads(const HiddenLayer& l) {
  HiddenGrads g;
  g.fc = make_affine_grads(l.fc);
  if (l.use_srelu) g.dwa.assign(l.srelu.dim(), 0.0);
  g.dgamma.assign(l.bn.dim(), 0.0);
  g.dbeta.assign(l.bn.dim(), 0.0);
  return g;
}

void zero_affine(AffineGrads& g) {
  g.dW.fill(0.0);
  g.db.assign(g.db.size(), 0.0);
}

void zero_hidden(HiddenGrads& g) {
  zero_affine(g.fc);
  g.dwa.assign(g.dwa.size(), 0.0);
  g.dgamma.assign(g.dgamma.size(), 0.0);
  g.dbeta.assign(g.dbeta.size(), 0.0);
}

}  // namespace

Model build_model(const ModelConfig& cfg) {
  validate(cfg);
  Model m;
  m.cfg = cfg;
  Rng rng(derive_seed(cfg.seed, "model-init"));
  std::size_t in = main_input_dim(cfg);
  for (std::size_t width : cfg.hidden_dims) {
    m.main_hidden.push_back(init_hidden(width, in, cfg.use_srelu, rng));
    in = width;
  }
  m.class_head = init_affine(cfg.num_classes, cfg.hidden_dims.back(), rng);
  if (m.has_own_reg_stack()) {
    in = cfg.input_dim;
    for (std::size_t width : cfg.hidden_dims) {
      m.reg_hidden.push_back(init_hidden(width, in, /*use_srelu=*/false, rng));
      in = width;
    }
  }
  if (m.has_reg()) {
    m.reg_head = init_affine(cfg.reg_target_dim, cfg.hidden_dims.back(), rng);
  }
  if (m.has_attr()) {
    m.attr_head = init_affine(cfg.attr_classes, cfg.hidden_dims.back(), rng);
  }
  return m;
}

namespace {

// Shared forward skeleton: `train` selects batch-statistics mode and cache
// filling. In eval mode the model is not mutated.
ForwardOutput forward_impl(Model& m, const Matrix& x, ForwardCache* cache, bool train,
                           bool update_running) {
  if (x.cols() != m.cfg.input_dim) {
    throw ShapeError("forward: input has " + std::to_string(x.cols()) +
                     " columns, model expects " + std::to_string(m.cfg.input_dim));
  }
  ForwardOutput out;
  Matrix reg_in;  // input of the regression head
  Matrix main_input = x;
  if (m.has_own_reg_stack()) {
    Matrix reg_final = train ? run_stack_train(m.reg_hidden, x, cache->reg, update_running)
                             : run_stack_eval(m.reg_hidden, x);
    reg_in = std::move(reg_final);
    out.reg_prediction = affine_forward(m.reg_head, reg_in);
    const Matrix& appended = m.cfg.hps_append_projection ? out.reg_prediction : reg_in;
    main_input = concat_cols(x, appended);
  }
  Matrix final_hidden = train ? run_stack_train(m.main_hidden, main_input, cache->main,
                                                update_running)
                              : run_stack_eval(m.main_hidden, main_input);
  Matrix logits = affine_forward(m.class_head, final_hidden);
  out.log_posteriors = log_softmax_forward(logits);
  if (m.has_reg() && !m.has_own_reg_stack()) {
    reg_in = final_hidden;
    out.reg_prediction = affine_forward(m.reg_head, reg_in);
  }
  if (m.has_attr()) {
    Matrix attr_logits = affine_forward(m.attr_head, reg_in);
    out.attr_log_probs = log_softmax_forward(attr_logits);
  }
  if (cache) {
    cache->main_input = std::move(main_input);
    cache->class_in = std::move(final_hidden);
    cache->logp = out.log_posteriors;
    cache->reg_in = std::move(reg_in);
    cache->attr_logp = out.attr_log_probs;
  }
  return out;
}

}  // namespace

ForwardOutput forward_train(Model& m, const Matrix& x, ForwardCache& cache, bool update_running) {
  return forward_impl(m, x, &cache, /*train=*/true, update_running);
}

ForwardOutput forward_eval(const Model& m, const Matrix& x) {
  // Eval mode never mutates the model; the const_cast only feeds the shared
  // skeleton, which takes the pure path throughout.
  return forward_impl(const_cast<Model&>(m), x, nullptr, /*train=*/false,
                      /*update_running=*/false);
}

GradBuffers make_grad_buffers(const Model& m) {
  GradBuffers g;
  for (const HiddenLayer& l : m.main_hidden) g.main_hidden.push_back(make_hidden_grads(l));
  g.class_head = make_affine_grads(m.class_head);
  for (const HiddenLayer& l : m.reg_hidden) g.reg_hidden.push_back(make_hidden_grads(l));
  if (m.has_reg()) g.reg_head = make_affine_grads(m.reg_head);
  if (m.has_attr()) g.attr_head = make_affine_grads(m.attr_head);
  return g;
}

void zero_grads(GradBuffers& g) {
  for (HiddenGrads& h : g.main_hidden) zero_hidden(h);
  zero_affine(g.class_head);
  for (HiddenGrads& h : g.reg_hidden) zero_hidden(h);
  zero_affine(g.reg_head);
  zero_affine(g.attr_head);
}

void backward(const Model& m, const ForwardCache& cache, const Matrix& dlogp, const Matrix* dreg,
              const Matrix* dattr, GradBuffers& g) {
  Matrix dlogits = log_softmax_backward(cache.logp, dlogp);
  Matrix d_class_in = affine_backward(m.class_head, cache.class_in, dlogits, g.class_head.dW,
                                      g.class_head.db);

  Matrix d_reg_in;  // gradient flowing into the regression-head input
  bool have_reg_in_grad = false;
  auto add_reg_in = [&](Matrix&& d) {
    if (!have_reg_in_grad) {
      d_reg_in = std::move(d);
      have_reg_in_grad = true;
    } else {
      axpy(1.0, d.data(), d_reg_in.data(), d_reg_in.size());
    }
  };

  if (dattr && m.has_attr()) {
    Matrix dattr_logits = log_softmax_backward(cache.attr_logp, *dattr);
    add_reg_in(affine_backward(m.attr_head, cache.reg_in, dattr_logits, g.attr_head.dW,
                               g.attr_head.db));
  }

  if (m.has_own_reg_stack()) {
    Matrix d_main_input = stack_backward(m.main_hidden, cache.main, d_class_in, g.main_hidden);
    const std::size_t base_cols = m.cfg.input_dim;
    const std::size_t app_cols = d_main_input.cols() - base_cols;
    Matrix d_app(d_main_input.rows(), app_cols);
    for (std::size_t i = 0; i < d_main_input.rows(); ++i) {
      const double* src = d_main_input.row(i) + base_cols;
      double* dst = d_app.row(i);
      for (std::size_t j = 0; j < app_cols; ++j) dst[j] = src[j];
    }
    if (m.cfg.hps_append_projection) {
      if (dreg) axpy(1.0, dreg->data(), d_app.data(), d_app.size());
      add_reg_in(affine_backward(m.reg_head, cache.reg_in, d_app, g.reg_head.dW, g.reg_head.db));
    } else {
      if (dreg) {
        add_reg_in(affine_backward(m.reg_head, cache.reg_in, *dreg, g.reg_head.dW, g.reg_head.db));
      }
      add_reg_in(std::move(d_app));
    }
    if (have_reg_in_grad) {
      stack_backward(m.reg_hidden, cache.reg, d_reg_in, g.reg_hidden);
    }
  } else {
    if (dreg && m.has_reg()) {
      add_reg_in(affine_backward(m.reg_head, cache.reg_in, *dreg, g.reg_head.dW, g.reg_head.db));
    }
    if (have_reg_in_grad) {
      axpy(1.0, d_reg_in.data(), d_class_in.data(), d_class_in.size());
    }
    stack_backward(m.main_hidden, cache.main, d_class_in, g.main_hidden);
  }
}

std::string param_group_name(ParamGroup g) {
  switch (g) {
    case ParamGroup::kFc:
      return "FC";
    case ParamGroup::kBn:
      return "BN";
    case ParamGroup::kSrelu:
      return "SRELU";
    case ParamGroup::kRegBranch:
      return "REG_BRANCH";
    case ParamGroup::kAttrHead:
      return "ATTR_HEAD";
  }
  throw ConfigError("unknown parameter group");
}

namespace {

// Visits the canonical block order over any model-shaped storage. The
// accessors map a layer/head to the concrete buffers (parameters or
// gradients), so the same ordering drives the optimizer, the checkpoint
// layout, and group selection.
template <typename HiddenT, typename AffineT, typename VecOf, typename MatOf, typename BiasOf,
          typename WaOf, typename GammaOf, typename BetaOf>
void visit_blocks(std::vector<HiddenT>& main_hidden, AffineT& class_head,
                  std::vector<HiddenT>& reg_hidden, AffineT* reg_head, AffineT* attr_head,
                  bool with_running, VecOf&& running_of, MatOf&& mat_of, BiasOf&& bias_of,
                  WaOf&& wa_of, GammaOf&& gamma_of, BetaOf&& beta_of,
                  std::vector<ParamRef>& out_refs) {
  auto add = [&](const std::string& name, ParamGroup group, std::vector<double>& v) {
    out_refs.push_back({name, group, v.data(), v.size()});
  };
  auto add_mat = [&](const std::string& name, ParamGroup group, Matrix& w) {
    out_refs.push_back({name, group, w.data(), w.size()});
  };
  for (std::size_t i = 0; i < main_hidden.size(); ++i) {
    const std::string p = "main." + std::to_string(i);
    add_mat(p + ".W", ParamGroup::kFc, mat_of(main_hidden[i]));
    add(p + ".b", ParamGroup::kFc, bias_of(main_hidden[i]));
    if (!wa_of(main_hidden[i]).empty()) {
      add(p + ".wa", ParamGroup::kSrelu, wa_of(main_hidden[i]));
    }
    add(p + ".gamma", ParamGroup::kBn, gamma_of(main_hidden[i]));
    add(p + ".beta", ParamGroup::kBn, beta_of(main_hidden[i]));
    if (with_running) {
      add(p + ".running_mean", ParamGroup::kBn, running_of(main_hidden[i], true));
      add(p + ".running_var", ParamGroup::kBn, running_of(main_hidden[i], false));
    }
  }
  add_mat("class.W", ParamGroup::kFc, mat_of(class_head));
  add("class.b", ParamGroup::kFc, bias_of(class_head));
  for (std::size_t i = 0; i < reg_hidden.size(); ++i) {
    const std::string p = "reg." + std::to_string(i);
    add_mat(p + ".W", ParamGroup::kRegBranch, mat_of(reg_hidden[i]));
    add(p + ".b", ParamGroup::kRegBranch, bias_of(reg_hidden[i]));
    add(p + ".gamma", ParamGroup::kRegBranch, gamma_of(reg_hidden[i]));
    add(p + ".beta", ParamGroup::kRegBranch, beta_of(reg_hidden[i]));
    if (with_running) {
      add(p + ".running_mean", ParamGroup::kRegBranch, running_of(reg_hidden[i], true));
      add(p + ".running_var", ParamGroup::kRegBranch, running_of(reg_hidden[i], false));
    }
  }
  if (reg_head) {
    add_mat("reg_head.W", ParamGroup::kRegBranch, mat_of(*reg_head));
    add("reg_head.b", ParamGroup::kRegBranch, bias_of(*reg_head));
  }
  if (attr_head) {
    add_mat("attr_head.W", ParamGroup::kAttrHead, mat_of(*attr_head));
    add("attr_head.b", ParamGroup::kAttrHead, bias_of(*attr_head));
  }
}

std::vector<ParamRef> model_refs(Model& m, bool with_running) {
  std::vector<ParamRef> refs;
  visit_blocks(
      m.main_hidden, m.class_head, m.reg_hidden, m.has_reg() ? &m.reg_head : nullptr,
      m.has_attr() ? &m.attr_head : nullptr, with_running,
      [](HiddenLayer& l, bool mean) -> std::vector<double>& {
        return mean ? l.bn.running_mean : l.bn.running_var;
      },
      [](auto& x) -> Matrix& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, HiddenLayer>) {
          return x.fc.W;
        } else {
          return x.W;
        }
      },
      [](auto& x) -> std::vector<double>& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, HiddenLayer>) {
          return x.fc.b;
        } else {
          return x.b;
        }
      },
      [](HiddenLayer& l) -> std::vector<double>& { return l.srelu.wa_diag; },
      [](HiddenLayer& l) -> std::vector<double>& { return l.bn.gamma; },
      [](HiddenLayer& l) -> std::vector<double>& { return l.bn.beta; }, refs);
  return refs;
}

}  // namespace

std::vector<ParamRef> trainable_params(Model& m) { return model_refs(m, false); }

std::vector<ParamRef> stored_params(Model& m) { return model_refs(m, true); }

std::vector<ParamRef> trainable_grads(GradBuffers& g, const Model& m) {
  std::vector<ParamRef> refs;
  std::vector<double> dummy;
  visit_blocks(
      g.main_hidden, g.class_head, g.reg_hidden, m.has_reg() ? &g.reg_head : nullptr,
      m.has_attr() ? &g.attr_head : nullptr, /*with_running=*/false,
      [&dummy](HiddenGrads&, bool) -> std::vector<double>& { return dummy; },
      [](auto& x) -> Matrix& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, HiddenGrads>) {
          return x.fc.dW;
        } else {
          return x.dW;
        }
      },
      [](auto& x) -> std::vector<double>& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, HiddenGrads>) {
          return x.fc.db;
        } else {
          return x.db;
        }
      },
      [](HiddenGrads& l) -> std::vector<double>& { return l.dwa; },
      [](HiddenGrads& l) -> std::vector<double>& { return l.dgamma; },
      [](HiddenGrads& l) -> std::vector<double>& { return l.dbeta; }, refs);
  return refs;
}

std::size_t trainable_count(const Model& m) {
  std::size_t total = 0;
  for (const ParamRef& r : trainable_params(const_cast<Model&>(m))) total += r.size;
  return total;
}

namespace {

std::set<ParamGroup> resolve_groups(const Model& m, const std::set<std::string>& names) {
  if (names.empty()) throw ConfigError("parameter group selection is empty");
  std::set<ParamGroup> groups;
  for (const std::string& n : names) {
    if (n == "NETWORK") {
      groups.insert(ParamGroup::kFc);
      groups.insert(ParamGroup::kBn);
    } else if (n == "FC") {
      groups.insert(ParamGroup::kFc);
    } else if (n == "BN") {
      groups.insert(ParamGroup::kBn);
    } else if (n == "SRELU") {
      if (!m.cfg.use_srelu) {
        throw ConfigError("group SRELU selected but the model has no sReLU scalers");
      }
      groups.insert(ParamGroup::kSrelu);
    } else if (n == "REG_BRANCH") {
      if (!m.has_reg()) {
        throw ConfigError("group REG_BRANCH selected but variant " +
                          variant_name(m.cfg.variant) + " has no regression branch");
      }
      groups.insert(ParamGroup::kRegBranch);
    } else if (n == "ATTR_HEAD") {
      if (!m.has_attr()) {
        throw ConfigError("group ATTR_HEAD selected but variant " + variant_name(m.cfg.variant) +
                          " has no attribute head");
      }
      groups.insert(ParamGroup::kAttrHead);
    } else {
      throw ConfigError("unknown parameter group '" + n +
                        "' (expected NETWORK, FC, BN, SRELU, REG_BRANCH or ATTR_HEAD)");
    }
  }
  return groups;
}

std::vector<ParamRef> filter_refs(std::vector<ParamRef> refs, const std::set<ParamGroup>& keep) {
  std::vector<ParamRef> out;
  for (ParamRef& r : refs) {
    if (keep.count(r.group)) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<ParamRef> select_params(Model& m, const std::set<std::string>& groups) {
  return filter_refs(trainable_params(m), resolve_groups(m, groups));
}

std::vector<ParamRef> select_grads(GradBuffers& g, const Model& m,
                                   const std::set<std::string>& groups) {
  return filter_refs(trainable_grads(g, m), resolve_groups(m, groups));
}

void insert_srelu(Model& m) {
  if (m.cfg.use_srelu) throw ConfigError("model already has sReLU scalers");
  for (HiddenLayer& l : m.main_hidden) {
    l.use_srelu = true;
    l.srelu.wa_diag.assign(l.bn.dim(), 1.0);
  }
  m.cfg.use_srelu = true;
}

}  // namespace gsasv
