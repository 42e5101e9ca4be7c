// core/src/experiment.cpp

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

#include "gsasv/experiment.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"
#include "gsasv/version.hpp"

namespace gsasv {

using nlohmann::json;

std::string cosine_denominator_name(CosineDenominator d) {
  return d == CosineDenominator::kProduct ? "product" : "literal_max";
}

CosineDenominator cosine_denominator_from_name(const std::string& name) {
  if (name == "product") return CosineDenominator::kProduct;
  if (name == "literal_max") return CosineDenominator::kLiteralMax;
  throw ConfigError("unknown cosine denominator '" + name +
                    "' (expected product or literal_max)");
}

namespace {

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("section '" + section + "' must be a JSON object");
  for (const auto& item : obj.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in section '" + section + "'");
    }
  }
}

double get_real(const json& obj, const char* key, const std::string& section, double cur) {
  if (!obj.contains(key)) return cur;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError("key '" + std::string(key) + "' in section '" + section +
                      "' must be a number");
  }
  return v.get<double>();
}

std::size_t get_count(const json& obj, const char* key, const std::string& section,
                      std::size_t cur) {
  if (!obj.contains(key)) return cur;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("key '" + std::string(key) + "' in section '" + section +
                      "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

bool get_bool(const json& obj, const char* key, const std::string& section, bool cur) {
  if (!obj.contains(key)) return cur;
  const json& v = obj.at(key);
  if (!v.is_boolean()) {
    throw ConfigError("key '" + std::string(key) + "' in section '" + section +
                      "' must be a boolean");
  }
  return v.get<bool>();
}

std::string get_str(const json& obj, const char* key, const std::string& section,
                    const std::string& cur) {
  if (!obj.contains(key)) return cur;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    throw ConfigError("key '" + std::string(key) + "' in section '" + section +
                      "' must be a string");
  }
  return v.get<std::string>();
}

const std::set<std::string> kTrainKeys = {
    "lr_init",   "lr_decay_factor", "lr_step_epochs", "weight_decay",
    "batch_size", "epochs",          "lambda",         "gamma",
    "epsilon",    "reg_loss",        "cosine_denom",   "reg_include_attr",
    "attr_kind"};

void apply_train_fields(TrainConfig& tc, const json& obj, const std::string& section) {
  tc.lr_init = get_real(obj, "lr_init", section, tc.lr_init);
  tc.lr_decay_factor = get_real(obj, "lr_decay_factor", section, tc.lr_decay_factor);
  tc.lr_step_epochs = get_count(obj, "lr_step_epochs", section, tc.lr_step_epochs);
  tc.weight_decay = get_real(obj, "weight_decay", section, tc.weight_decay);
  tc.batch_size = get_count(obj, "batch_size", section, tc.batch_size);
  tc.epochs = get_count(obj, "epochs", section, tc.epochs);
  tc.loss_weights.lambda = get_real(obj, "lambda", section, tc.loss_weights.lambda);
  tc.loss_weights.gamma = get_real(obj, "gamma", section, tc.loss_weights.gamma);
  tc.smoothing.epsilon = get_real(obj, "epsilon", section, tc.smoothing.epsilon);
  if (obj.contains("reg_loss")) {
    tc.reg_loss = reg_loss_from_name(get_str(obj, "reg_loss", section, ""));
  }
  if (obj.contains("cosine_denom")) {
    tc.cosine_denom = cosine_denominator_from_name(get_str(obj, "cosine_denom", section, ""));
  }
}

void apply_data_section(ExperimentConfig& cfg, const json& obj) {
  check_keys(obj, "data",
             {"asv_embeddings", "cm_embeddings", "metadata", "trials", "synth", "pairing"});
  cfg.asv_path = get_str(obj, "asv_embeddings", "data", cfg.asv_path);
  cfg.cm_path = get_str(obj, "cm_embeddings", "data", cfg.cm_path);
  cfg.metadata_path = get_str(obj, "metadata", "data", cfg.metadata_path);
  cfg.trials_path = get_str(obj, "trials", "data", cfg.trials_path);
  if (obj.contains("synth")) {
    const json& s = obj.at("synth");
    check_keys(s, "data.synth",
               {"n_speakers", "utts_per_speaker", "n_attacks", "spoofs_per_speaker_per_attack",
                "asv_dim", "cm_dim", "n_vocoders", "n_synthesizers", "n_wavegens",
                "speaker_scale", "attack_scale", "noise_sigma"});
    SynthConfig& sc = cfg.synth;
    sc.n_speakers = get_count(s, "n_speakers", "data.synth", sc.n_speakers);
    sc.utts_per_speaker = get_count(s, "utts_per_speaker", "data.synth", sc.utts_per_speaker);
    sc.n_attacks = get_count(s, "n_attacks", "data.synth", sc.n_attacks);
    sc.spoofs_per_speaker_per_attack =
        get_count(s, "spoofs_per_speaker_per_attack", "data.synth",
                  sc.spoofs_per_speaker_per_attack);
    sc.asv_dim = get_count(s, "asv_dim", "data.synth", sc.asv_dim);
    sc.cm_dim = get_count(s, "cm_dim", "data.synth", sc.cm_dim);
    sc.n_vocoders = get_count(s, "n_vocoders", "data.synth", sc.n_vocoders);
    sc.n_synthesizers = get_count(s, "n_synthesizers", "data.synth", sc.n_synthesizers);
    sc.n_wavegens = get_count(s, "n_wavegens", "data.synth", sc.n_wavegens);
    sc.speaker_scale = get_real(s, "speaker_scale", "data.synth", sc.speaker_scale);
    sc.attack_scale = get_real(s, "attack_scale", "data.synth", sc.attack_scale);
    sc.noise_sigma = get_real(s, "noise_sigma", "data.synth", sc.noise_sigma);
  }
  if (obj.contains("pairing")) {
    const json& p = obj.at("pairing");
    check_keys(p, "data.pairing",
               {"mode", "ordered", "cap_target", "cap_nontarget", "cap_spoof", "eval_fraction"});
    if (p.contains("mode")) {
      const std::string mode = get_str(p, "mode", "data.pairing", "");
      if (mode == "full") {
        cfg.pairing.mode = PairMode::kFull;
      } else if (mode == "sampled") {
        cfg.pairing.mode = PairMode::kSampled;
      } else {
        throw ConfigError("unknown pairing mode '" + mode + "' (expected full or sampled)");
      }
    }
    cfg.pairing.ordered = get_bool(p, "ordered", "data.pairing", cfg.pairing.ordered);
    cfg.pairing.cap_target = get_count(p, "cap_target", "data.pairing", cfg.pairing.cap_target);
    cfg.pairing.cap_nontarget =
        get_count(p, "cap_nontarget", "data.pairing", cfg.pairing.cap_nontarget);
    cfg.pairing.cap_spoof = get_count(p, "cap_spoof", "data.pairing", cfg.pairing.cap_spoof);
    cfg.eval_fraction = get_real(p, "eval_fraction", "data.pairing", cfg.eval_fraction);
  }
}

void apply_model_section(ExperimentConfig& cfg, const json& obj) {
  check_keys(obj, "model",
             {"variant", "input_dim", "hidden_dims", "num_classes", "use_srelu",
              "reg_target_dim", "attr_classes", "hps_append_projection"});
  if (obj.contains("variant")) {
    cfg.model.variant = variant_from_name(get_str(obj, "variant", "model", ""));
  }
  cfg.model.input_dim = get_count(obj, "input_dim", "model", cfg.model.input_dim);
  if (obj.contains("hidden_dims")) {
    const json& dims = obj.at("hidden_dims");
    if (!dims.is_array() || dims.empty()) {
      throw ConfigError("key 'hidden_dims' in section 'model' must be a non-empty array");
    }
    std::vector<std::size_t> hd;
    for (const json& d : dims) {
      if (!d.is_number_integer() || d.get<std::int64_t>() <= 0) {
        throw ConfigError("hidden_dims entries must be positive integers");
      }
      hd.push_back(static_cast<std::size_t>(d.get<std::int64_t>()));
    }
    cfg.model.hidden_dims = hd;
  }
  cfg.model.num_classes = get_count(obj, "num_classes", "model", cfg.model.num_classes);
  cfg.model.use_srelu = get_bool(obj, "use_srelu", "model", cfg.model.use_srelu);
  cfg.model.reg_target_dim = get_count(obj, "reg_target_dim", "model", cfg.model.reg_target_dim);
  cfg.model.attr_classes = get_count(obj, "attr_classes", "model", cfg.model.attr_classes);
  cfg.model.hps_append_projection =
      get_bool(obj, "hps_append_projection", "model", cfg.model.hps_append_projection);
}

void apply_adapt_section(ExperimentConfig& cfg, const json& obj) {
  std::set<std::string> allowed = kTrainKeys;
  allowed.erase("reg_include_attr");
  allowed.erase("attr_kind");
  allowed.insert("groups");
  allowed.insert("add_srelu");
  check_keys(obj, "adapt", allowed);
  cfg.has_adapt = true;
  if (obj.contains("groups")) {
    const json& groups = obj.at("groups");
    if (!groups.is_array()) {
      throw ConfigError("key 'groups' in section 'adapt' must be an array of group names");
    }
    cfg.adapt_groups.clear();
    for (const json& g : groups) {
      if (!g.is_string()) throw ConfigError("adapt group names must be strings");
      cfg.adapt_groups.insert(g.get<std::string>());
    }
  }
  cfg.adapt_add_srelu = get_bool(obj, "add_srelu", "adapt", cfg.adapt_add_srelu);
  apply_train_fields(cfg.adapt_train, obj, "adapt");
}

}  // namespace

void apply_experiment_json(ExperimentConfig& cfg, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "(top level)",
             {"seed", "data", "model", "train", "adapt", "scoring", "eval", "sweep"});
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
      throw ConfigError("key 'seed' must be a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("data")) apply_data_section(cfg, doc.at("data"));
  if (doc.contains("model")) apply_model_section(cfg, doc.at("model"));
  if (doc.contains("train")) {
    const json& t = doc.at("train");
    check_keys(t, "train", kTrainKeys);
    apply_train_fields(cfg.train, t, "train");
    cfg.reg_include_attr = get_bool(t, "reg_include_attr", "train", cfg.reg_include_attr);
    if (t.contains("attr_kind")) {
      cfg.attr_kind = attr_kind_from_name(get_str(t, "attr_kind", "train", ""));
    }
  }
  cfg.adapt_train = cfg.train;
  if (doc.contains("adapt")) apply_adapt_section(cfg, doc.at("adapt"));
  if (doc.contains("scoring")) {
    const json& s = doc.at("scoring");
    check_keys(s, "scoring", {"alpha", "floor"});
    cfg.scoring.alpha = get_real(s, "alpha", "scoring", cfg.scoring.alpha);
    cfg.scoring.floor = get_real(s, "floor", "scoring", cfg.scoring.floor);
  }
  if (doc.contains("eval")) {
    const json& e = doc.at("eval");
    check_keys(e, "eval", {"trials"});
    cfg.eval_trials_path = get_str(e, "trials", "eval", cfg.eval_trials_path);
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    check_keys(s, "sweep", {"param", "grid"});
    cfg.sweep_param = get_str(s, "param", "sweep", cfg.sweep_param);
    cfg.sweep_grid = get_str(s, "grid", "sweep", cfg.sweep_grid);
  }
}

void resolve_seeds(ExperimentConfig& cfg) {
  cfg.synth.seed = cfg.seed;
  cfg.pairing.seed = cfg.seed;
  cfg.model.seed = cfg.seed;
  cfg.train.seed = cfg.seed;
  cfg.adapt_train.seed = cfg.seed;
}

namespace {

json train_to_json(const TrainConfig& tc) {
  json t;
  t["lr_init"] = tc.lr_init;
  t["lr_decay_factor"] = tc.lr_decay_factor;
  t["lr_step_epochs"] = tc.lr_step_epochs;
  t["weight_decay"] = tc.weight_decay;
  t["batch_size"] = tc.batch_size;
  t["epochs"] = tc.epochs;
  t["lambda"] = tc.loss_weights.lambda;
  t["gamma"] = tc.loss_weights.gamma;
  t["epsilon"] = tc.smoothing.epsilon;
  t["reg_loss"] = reg_loss_name(tc.reg_loss);
  t["cosine_denom"] = cosine_denominator_name(tc.cosine_denom);
  return t;
}

json experiment_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["seed"] = cfg.seed;

  json synth;
  synth["n_speakers"] = cfg.synth.n_speakers;
  synth["utts_per_speaker"] = cfg.synth.utts_per_speaker;
  synth["n_attacks"] = cfg.synth.n_attacks;
  synth["spoofs_per_speaker_per_attack"] = cfg.synth.spoofs_per_speaker_per_attack;
  synth["asv_dim"] = cfg.synth.asv_dim;
  synth["cm_dim"] = cfg.synth.cm_dim;
  synth["n_vocoders"] = cfg.synth.n_vocoders;
  synth["n_synthesizers"] = cfg.synth.n_synthesizers;
  synth["n_wavegens"] = cfg.synth.n_wavegens;
  synth["speaker_scale"] = cfg.synth.speaker_scale;
  synth["attack_scale"] = cfg.synth.attack_scale;
  synth["noise_sigma"] = cfg.synth.noise_sigma;

  json pairing;
  pairing["mode"] = cfg.pairing.mode == PairMode::kFull ? "full" : "sampled";
  pairing["ordered"] = cfg.pairing.ordered;
  pairing["cap_target"] = cfg.pairing.cap_target;
  pairing["cap_nontarget"] = cfg.pairing.cap_nontarget;
  pairing["cap_spoof"] = cfg.pairing.cap_spoof;
  pairing["eval_fraction"] = cfg.eval_fraction;

  json data;
  data["asv_embeddings"] = cfg.asv_path;
  data["cm_embeddings"] = cfg.cm_path;
  data["metadata"] = cfg.metadata_path;
  data["trials"] = cfg.trials_path;
  data["synth"] = synth;
  data["pairing"] = pairing;
  doc["data"] = data;

  json model;
  model["variant"] = variant_name(cfg.model.variant);
  model["input_dim"] = cfg.model.input_dim;
  model["hidden_dims"] = cfg.model.hidden_dims;
  model["num_classes"] = cfg.model.num_classes;
  model["use_srelu"] = cfg.model.use_srelu;
  model["reg_target_dim"] = cfg.model.reg_target_dim;
  model["attr_classes"] = cfg.model.attr_classes;
  model["hps_append_projection"] = cfg.model.hps_append_projection;
  doc["model"] = model;

  json train = train_to_json(cfg.train);
  train["reg_include_attr"] = cfg.reg_include_attr;
  train["attr_kind"] = attr_kind_name(cfg.attr_kind);
  doc["train"] = train;

  json adapt = train_to_json(cfg.adapt_train);
  adapt["groups"] = json::array();
  for (const std::string& g : cfg.adapt_groups) adapt["groups"].push_back(g);
  adapt["add_srelu"] = cfg.adapt_add_srelu;
  doc["adapt"] = adapt;

  json scoring;
  scoring["alpha"] = cfg.scoring.alpha;
  scoring["floor"] = cfg.scoring.floor;
  doc["scoring"] = scoring;

  json eval;
  eval["trials"] = cfg.eval_trials_path;
  doc["eval"] = eval;

  json sweep;
  sweep["param"] = cfg.sweep_param;
  sweep["grid"] = cfg.sweep_grid;
  doc["sweep"] = sweep;
  return doc;
}

}  // namespace

std::string resolved_experiment_json(const ExperimentConfig& cfg) {
  return experiment_to_json(cfg).dump(2) + "\n";
}

InputRecord record_input(const std::string& path) {
  const std::string bytes = read_file(path);
  InputRecord rec;
  rec.path = path;
  rec.bytes = bytes.size();
  rec.crc = crc32(bytes.data(), bytes.size());
  return rec;
}

std::string manifest_json(const std::string& command, const ExperimentConfig& cfg,
                          const std::vector<InputRecord>& inputs,
                          const std::vector<std::string>& outputs) {
  json doc;
  doc["command"] = command;
  doc["config"] = experiment_to_json(cfg);
  json in = json::object();
  for (const InputRecord& r : inputs) {
    json entry;
    entry["bytes"] = r.bytes;
    entry["crc32"] = r.crc;
    in[r.path] = entry;
  }
  doc["inputs"] = in;
  doc["outputs"] = outputs;
  doc["seed"] = cfg.seed;
  json versions;
  versions["gsasv"] = kVersionString;
  versions["checkpoint_format"] = kCheckpointFormatVersion;
  versions["embedding_format"] = kEmbeddingFormatVersion;
  doc["versions"] = versions;
  return doc.dump(2) + "\n";
}

}  // namespace gsasv
