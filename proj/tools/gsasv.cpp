// tools/gsasv.cpp

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

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "gsasv/batching.hpp"
#include "gsasv/checkpoint.hpp"
#include "gsasv/embedding.hpp"
#include "gsasv/errors.hpp"
#include "gsasv/eval.hpp"
#include "gsasv/experiment.hpp"
#include "gsasv/io_util.hpp"
#include "gsasv/metadata.hpp"
#include "gsasv/model.hpp"
#include "gsasv/rng.hpp"
#include "gsasv/scoring.hpp"
#include "gsasv/sweep.hpp"
#include "gsasv/synth.hpp"
#include "gsasv/trainer.hpp"
#include "gsasv/trials.hpp"
#include "gsasv/version.hpp"
#include "selfcheck.hpp"

namespace {

using namespace gsasv;

// One carrier for every subcommand's bound flags; exactly one subcommand
// parses per invocation.
struct Opts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  std::string asv_path;
  std::string cm_path;
  std::string metadata_path;
  std::string trials_path;
  std::string eval_trials_path;

  std::string preset;
  std::size_t speakers = 0;
  std::size_t utts_per_speaker = 0;
  std::size_t attacks = 0;
  std::size_t spoofs_per_attack = 0;
  std::size_t asv_dim = 0;
  std::size_t cm_dim = 0;
  std::size_t vocoders = 0;
  std::size_t synthesizers = 0;
  std::size_t wavegens = 0;
  double speaker_scale = 1.0;
  double attack_scale = 1.0;
  double noise_sigma = 0.05;

  std::string pair_mode;
  bool ordered = false;
  std::size_t cap_target = 0;
  std::size_t cap_nontarget = 0;
  std::size_t cap_spoof = 0;
  double eval_fraction = 0.2;

  std::string variant;
  std::vector<std::size_t> hidden;
  std::size_t input_dim = 0;
  bool use_srelu = false;
  bool hps_append_projection = false;
  std::size_t reg_target_dim = 0;
  std::size_t attr_classes = 0;

  double lr = 0.001;
  double lr_decay = 0.1;
  std::size_t lr_step = 10;
  double weight_decay = 1e-7;
  std::size_t batch_size = 128;
  std::size_t epochs = 20;
  double lambda = 0.5;
  double gamma = 0.5;
  double epsilon = 0.0;
  std::string reg_loss;
  std::string cosine_denom;
  std::string attr_kind;
  bool reg_include_attr = false;

  std::string model_path;
  std::string groups;
  bool add_srelu = false;

  std::string backend = "llr";
  double alpha = 0.95;
  double floor = 1e-30;
  std::string scores_path;

  std::string grid;
  bool attr_kinds = false;

  std::size_t instances = 100;
};

bool given(const CLI::App* sub, const std::string& name) {
  const CLI::Option* opt = sub->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

std::string out_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string shell_join(int argc, char** argv) {
  std::string line;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) line += ' ';
    const std::string arg = argv[i];
    if (arg.find_first_of(" \t'\"") == std::string::npos && !arg.empty()) {
      line += arg;
    } else {
      line += '\'';
      for (char c : arg) {
        if (c == '\'') {
          line += "'\\''";
        } else {
          line += c;
        }
      }
      line += '\'';
    }
  }
  return line;
}

ExperimentConfig base_config(const Opts& o, std::vector<InputRecord>& inputs) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    apply_experiment_json(cfg, read_file(o.config_path));
    inputs.push_back(record_input(o.config_path));
  }
  return cfg;
}

void write_run_records(const std::string& cmdline, const ExperimentConfig& cfg,
                       const std::string& out_dir, const std::vector<InputRecord>& inputs,
                       const std::vector<std::string>& outputs) {
  atomic_write_file(out_path(out_dir, "config.resolved.json"), resolved_experiment_json(cfg));
  atomic_write_file(out_path(out_dir, "manifest.json"),
                    manifest_json(cmdline, cfg, inputs, outputs));
}

std::size_t resolve_threads(const CLI::App* sub, const Opts& o) {
  if (given(sub, "--threads")) return o.threads == 0 ? 1 : o.threads;
  if (const char* env = std::getenv("GSASV_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
      throw ConfigError("GSASV_THREADS must be a positive integer, got '" + std::string(env) +
                        "'");
    }
    return static_cast<std::size_t>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

void apply_data_flags(const CLI::App* sub, const Opts& o, ExperimentConfig& cfg) {
  if (given(sub, "--asv")) cfg.asv_path = o.asv_path;
  if (given(sub, "--cm")) cfg.cm_path = o.cm_path;
  if (given(sub, "--metadata")) cfg.metadata_path = o.metadata_path;
  if (given(sub, "--trials")) cfg.trials_path = o.trials_path;
}

void apply_model_flags(const CLI::App* sub, const Opts& o, ExperimentConfig& cfg) {
  if (given(sub, "--variant")) cfg.model.variant = variant_from_name(o.variant);
  if (given(sub, "--hidden")) cfg.model.hidden_dims = o.hidden;
  if (given(sub, "--input-dim")) cfg.model.input_dim = o.input_dim;
  if (given(sub, "--use-srelu")) cfg.model.use_srelu = true;
  if (given(sub, "--hps-append-projection")) cfg.model.hps_append_projection = true;
  if (given(sub, "--reg-target-dim")) cfg.model.reg_target_dim = o.reg_target_dim;
  if (given(sub, "--attr-classes")) cfg.model.attr_classes = o.attr_classes;
}

void apply_train_flags(const CLI::App* sub, const Opts& o, TrainConfig& t) {
  if (given(sub, "--lr")) t.lr_init = o.lr;
  if (given(sub, "--lr-decay-factor")) t.lr_decay_factor = o.lr_decay;
  if (given(sub, "--lr-step-epochs")) t.lr_step_epochs = o.lr_step;
  if (given(sub, "--weight-decay")) t.weight_decay = o.weight_decay;
  if (given(sub, "--batch-size")) t.batch_size = o.batch_size;
  if (given(sub, "--epochs")) t.epochs = o.epochs;
  if (given(sub, "--lambda")) t.loss_weights.lambda = o.lambda;
  if (given(sub, "--gamma")) t.loss_weights.gamma = o.gamma;
  if (given(sub, "--epsilon")) t.smoothing.epsilon = o.epsilon;
  if (given(sub, "--reg-loss")) t.reg_loss = reg_loss_from_name(o.reg_loss);
  if (given(sub, "--cosine-denom")) t.cosine_denom = cosine_denominator_from_name(o.cosine_denom);
}

void apply_scoring_flags(const CLI::App* sub, const Opts& o, ScoringConfig& s) {
  if (given(sub, "--alpha")) s.alpha = o.alpha;
  if (given(sub, "--floor")) s.floor = o.floor;
}

// The untouched input_dim default follows the embeddings; reg_target_dim 0
// and attr_classes 0 mean "derive from the stores".
ModelConfig resolve_model_config(ModelConfig mc, const EmbeddingStore& asv,
                                 const EmbeddingStore* cm, const Metadata* meta,
                                 bool reg_include_attr, AttrKind attr_kind) {
  const std::size_t pair_dim = 2 * asv.dim();
  if (mc.input_dim != pair_dim) {
    if (mc.input_dim == ModelConfig{}.input_dim) {
      mc.input_dim = pair_dim;
    } else {
      throw ConfigError("model input_dim is " + std::to_string(mc.input_dim) +
                        " but the embedding pair gives " + std::to_string(pair_dim));
    }
  }
  std::size_t attr_dim = 0;
  if (variant_has_attr(mc.variant) || (variant_has_reg(mc.variant) && reg_include_attr)) {
    if (!meta) throw ConfigError("cannot derive attribute dimensions without metadata");
    attr_dim = meta->vocab(attr_kind).size() + 1;
  }
  if (variant_has_attr(mc.variant) && mc.attr_classes == 0) mc.attr_classes = attr_dim;
  if (variant_has_reg(mc.variant) && mc.reg_target_dim == 0) {
    if (!cm) throw ConfigError("cannot derive reg_target_dim without spoof embeddings");
    mc.reg_target_dim = cm->dim() + (reg_include_attr ? attr_dim : 0);
  }
  return mc;
}

struct TrainData {
  EmbeddingStore asv;
  std::optional<EmbeddingStore> cm;
  std::optional<Metadata> meta;
  std::vector<TrialPair> trials;
};

TrainData load_train_data(const ExperimentConfig& cfg, Variant variant,
                          std::vector<InputRecord>& inputs) {
  if (cfg.asv_path.empty()) {
    throw ConfigError("no ASV embeddings given (--asv or data.asv_embeddings)");
  }
  if (cfg.trials_path.empty()) {
    throw ConfigError("no trial list given (--trials or data.trials)");
  }
  TrainData d;
  d.asv = read_embeddings(cfg.asv_path);
  inputs.push_back(record_input(cfg.asv_path));
  d.trials = read_trials(cfg.trials_path);
  inputs.push_back(record_input(cfg.trials_path));
  const bool need_reg = variant_has_reg(variant);
  const bool need_attr = variant_has_attr(variant) || (need_reg && cfg.reg_include_attr);
  if (!cfg.cm_path.empty()) {
    d.cm = read_embeddings(cfg.cm_path);
    inputs.push_back(record_input(cfg.cm_path));
  } else if (need_reg) {
    throw ConfigError("variant " + variant_name(variant) +
                      " needs spoof embeddings (--cm or data.cm_embeddings)");
  }
  if (!cfg.metadata_path.empty()) {
    d.meta = read_metadata(cfg.metadata_path);
    inputs.push_back(record_input(cfg.metadata_path));
  } else if (need_attr) {
    throw ConfigError("variant " + variant_name(variant) +
                      " needs metadata (--metadata or data.metadata)");
  }
  return d;
}

BatchPlanConfig make_plan(const ExperimentConfig& cfg, const TrainConfig& train, Variant variant) {
  BatchPlanConfig plan;
  plan.batch_size = train.batch_size;
  plan.seed = train.seed;
  plan.need_reg = variant_has_reg(variant);
  plan.reg_include_attr = cfg.reg_include_attr;
  plan.need_attr = variant_has_attr(variant);
  plan.attr_kind = cfg.attr_kind;
  return plan;
}

void check_model_input(const Model& m, const EmbeddingStore& asv) {
  if (m.cfg.input_dim != 2 * asv.dim()) {
    throw ConfigError("checkpoint expects input dimension " + std::to_string(m.cfg.input_dim) +
                      " but the embedding pair gives " + std::to_string(2 * asv.dim()));
  }
}

std::set<std::string> parse_groups(const std::string& text) {
  std::set<std::string> groups;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) groups.insert(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) groups.insert(cur);
  return groups;
}

int cmd_gen_synth(const CLI::App* sub, const Opts& o, const std::string& cmdline) {
  std::vector<InputRecord> inputs;
  ExperimentConfig cfg = base_config(o, inputs);
  if (given(sub, "--preset")) {
    if (o.preset != "separable") throw ConfigError("unknown preset '" + o.preset + "'");
    cfg.synth = separable_preset();
  }
  if (given(sub, "--speakers")) cfg.synth.n_speakers = o.speakers;
  if (given(sub, "--utts-per-speaker")) cfg.synth.utts_per_speaker = o.utts_per_speaker;
  if (given(sub, "--attacks")) cfg.synth.n_attacks = o.attacks;
  if (given(sub, "--spoofs-per-attack")) cfg.synth.spoofs_per_speaker_per_attack = o.spoofs_per_attack;
  if (given(sub, "--asv-dim")) cfg.synth.asv_dim = o.asv_dim;
  if (given(sub, "--cm-dim")) cfg.synth.cm_dim = o.cm_dim;
  if (given(sub, "--vocoders")) cfg.synth.n_vocoders = o.vocoders;
  if (given(sub, "--synthesizers")) cfg.synth.n_synthesizers = o.synthesizers;
  if (given(sub, "--wavegens")) cfg.synth.n_wavegens = o.wavegens;
  if (given(sub, "--speaker-scale")) cfg.synth.speaker_scale = o.speaker_scale;
  if (given(sub, "--attack-scale")) cfg.synth.attack_scale = o.attack_scale;
  if (given(sub, "--noise-sigma")) cfg.synth.noise_sigma = o.noise_sigma;
  if (given(sub, "--seed")) cfg.seed = o.seed;
  resolve_seeds(cfg);

  const SynthOutput data = synth_generate(cfg.synth);
  const std::string asv_file = out_path(o.out_dir, "asv_embeddings.bin");
  const std::string cm_file = out_path(o.out_dir, "cm_embeddings.bin");
  const std::string meta_file = out_path(o.out_dir, "metadata.tsv");
  write_embeddings(data.asv, asv_file);
  write_embeddings(data.cm, cm_file);
  write_metadata(data.meta, meta_file);
  write_run_records(cmdline, cfg, o.out_dir, inputs, {asv_file, cm_file, meta_file});
  std::cout << "wrote " << data.meta.records.size() << " utterances for "
            << cfg.synth.n_speakers << " speakers to " << o.out_dir << "\n";
  return 0;
}

int cmd_gen_trials(const CLI::App* sub, const Opts& o, const std::string& cmdline) {
  std::vector<InputRecord> inputs;
  ExperimentConfig cfg = base_config(o, inputs);
  if (given(sub, "--metadata")) cfg.metadata_path = o.metadata_path;
  if (given(sub, "--mode")) {
    if (o.pair_mode == "full") {
      cfg.pairing.mode = PairMode::kFull;
    } else if (o.pair_mode == "sampled") {
      cfg.pairing.mode = PairMode::kSampled;
    } else {
      throw ConfigError("unknown pairing mode '" + o.pair_mode + "' (full, sampled)");
    }
  }
  if (given(sub, "--ordered")) cfg.pairing.ordered = true;
  if (given(sub, "--cap-target")) cfg.pairing.cap_target = o.cap_target;
  if (given(sub, "--cap-nontarget")) cfg.pairing.cap_nontarget = o.cap_nontarget;
  if (given(sub, "--cap-spoof")) cfg.pairing.cap_spoof = o.cap_spoof;
  if (given(sub, "--eval-fraction")) cfg.eval_fraction = o.eval_fraction;
  if (given(sub, "--seed")) cfg.seed = o.seed;
  resolve_seeds(cfg);

  if (cfg.metadata_path.empty()) {
    throw ConfigError("no metadata file given (--metadata or data.metadata)");
  }
  const Metadata meta = read_metadata(cfg.metadata_path);
  inputs.push_back(record_input(cfg.metadata_path));
  const std::vector<TrialPair> trials = generate_trials(meta, cfg.pairing);

  const std::string trials_file = out_path(o.out_dir, "trials.tsv");
  write_trials(trials, trials_file);
  std::vector<std::string> outputs = {trials_file};
  if (cfg.eval_fraction > 0.0) {
    const TrialSplit split =
        split_trials(trials, cfg.eval_fraction, derive_seed(cfg.pairing.seed, "split"));
    const std::string train_file = out_path(o.out_dir, "trials_train.tsv");
    const std::string eval_file = out_path(o.out_dir, "trials_eval.tsv");
    write_trials(split.train, train_file);
    write_trials(split.eval, eval_file);
    outputs.push_back(train_file);
    outputs.push_back(eval_file);
  }
  write_run_records(cmdline, cfg, o.out_dir, inputs, outputs);

  std::size_t n_tar = 0;
  std::size_t n_non = 0;
  std::size_t n_spf = 0;
  for (const TrialPair& t : trials) {
    if (t.label == TrialLabel::kTarget) {
      ++n_tar;
    } else if (t.label == TrialLabel::kNontarget) {
      ++n_non;
    } else {
      ++n_spf;
    }
  }
  std::cout << "wrote " << trials.size() << " trials (" << n_tar << " target, " << n_non
            << " nontarget, " << n_spf << " spoof)\n";
  return 0;
}

int cmd_train(const CLI::App* sub, const Opts& o, const std::string& cmdline) {
  std::vector<InputRecord> inputs;
  ExperimentConfig cfg = base_config(o, inputs);
  apply_data_flags(sub, o, cfg);
  apply_model_flags(sub, o, cfg);
  apply_train_flags(sub, o, cfg.train);
  if (given(sub, "--reg-include-attr")) cfg.reg_include_attr = true;
  if (given(sub, "--attr-kind")) cfg.attr_kind = attr_kind_from_name(o.attr_kind);
  if (given(sub, "--seed")) cfg.seed = o.seed;
  resolve_seeds(cfg);

  TrainData d = load_train_data(cfg, cfg.model.variant, inputs);
  cfg.model = resolve_model_config(cfg.model, d.asv, d.cm ? &*d.cm : nullptr,
                                   d.meta ? &*d.meta : nullptr, cfg.reg_include_attr,
                                   cfg.attr_kind);
  if (variant_has_attr(cfg.model.variant)) cfg.train.smoothing.k = cfg.model.attr_classes;

  const BatchPlanConfig plan = make_plan(cfg, cfg.train, cfg.model.variant);
  const BatchSource data(d.trials, d.asv, d.meta ? &*d.meta : nullptr,
                         d.cm ? &*d.cm : nullptr, plan);
  Model m = build_model(cfg.model);
  const TrainLog log = train(m, data, cfg.train);

  const std::string model_file = out_path(o.out_dir, "model.ckpt");
  const std::string log_file = out_path(o.out_dir, "train_log.tsv");
  save_checkpoint(m, model_file);
  write_train_log(log, log_file);
  write_run_records(cmdline, cfg, o.out_dir, inputs, {model_file, log_file});
  std::cout << "trained " << variant_name(cfg.model.variant) << " on " << data.num_trials()
            << " trials, final loss " << format_fixed6(log.epochs.back().loss_total) << "\n";
  return 0;
}

int cmd_adapt(const CLI::App* sub, const Opts& o, const std::string& cmdline) {
  std::vector<InputRecord> inputs;
  ExperimentConfig cfg = base_config(o, inputs);
  apply_data_flags(sub, o, cfg);
  apply_train_flags(sub, o, cfg.adapt_train);
  cfg.has_adapt = true;
  if (given(sub, "--groups")) cfg.adapt_groups = parse_groups(o.groups);
  if (given(sub, "--add-srelu")) cfg.adapt_add_srelu = true;
  if (given(sub, "--seed")) cfg.seed = o.seed;

  Model m = load_checkpoint(o.model_path);
  inputs.push_back(record_input(o.model_path));
  cfg.model = m.cfg;
  resolve_seeds(cfg);

  if (cfg.adapt_groups.empty() && cfg.adapt_add_srelu) cfg.adapt_groups = {"SRELU"};
  if (cfg.adapt_groups.empty()) {
    throw ConfigError("no parameter groups given (--groups or adapt.groups)");
  }

  TrainData d = load_train_data(cfg, m.cfg.variant, inputs);
  check_model_input(m, d.asv);
  if (m.has_attr()) cfg.adapt_train.smoothing.k = m.cfg.attr_classes;

  const BatchPlanConfig plan = make_plan(cfg, cfg.adapt_train, m.cfg.variant);
  const BatchSource data(d.trials, d.asv, d.meta ? &*d.meta : nullptr,
                         d.cm ? &*d.cm : nullptr, plan);
  AdaptConfig ac;
  ac.groups = cfg.adapt_groups;
  ac.add_srelu = cfg.adapt_add_srelu;
  ac.train = cfg.adapt_train;
  const TrainLog log = adapt(m, data, ac);

  const std::string model_file = out_path(o.out_dir, "model.ckpt");
  const std::string log_file = out_path(o.out_dir, "train_log.tsv");
  save_checkpoint(m, model_file);
  write_train_log(log, log_file);
  write_run_records(cmdline, cfg, o.out_dir, inputs, {model_file, log_file});
  std::cout << "adapted " << variant_name(m.cfg.variant) << " on " << data.num_trials()
            << " trials, final loss " << format_fixed6(log.epochs.back().loss_total) << "\n";
  return 0;
}

int cmd_score(const CLI::App* sub, const Opts& o, const std::string& cmdline) {
  std::vector<InputRecord> inputs;
  ExperimentConfig cfg = base_config(o, inputs);
  apply_data_flags(sub, o, cfg);
  apply_scoring_flags(sub, o, cfg.scoring);
  if (given(sub, "--seed")) cfg.seed = o.seed;
  resolve_seeds(cfg);

  if (cfg.asv_path.empty()) {
    throw ConfigError("no ASV embeddings given (--asv or data.asv_embeddings)");
  }
  if (cfg.trials_path.empty()) {
    throw ConfigError("no trial list given (--trials or data.trials)");
  }
  const EmbeddingStore asv = read_embeddings(cfg.asv_path);
  inputs.push_back(record_input(cfg.asv_path));
  const std::vector<TrialPair> trials = read_trials(cfg.trials_path);
  inputs.push_back(record_input(cfg.trials_path));

  std::vector<double> scores;
  if (o.backend == "llr") {
    if (o.model_path.empty()) throw ConfigError("the llr backend needs a checkpoint (--model)");
    const Model m = load_checkpoint(o.model_path);
    inputs.push_back(record_input(o.model_path));
    check_model_input(m, asv);
    const std::vector<PosteriorTriple> post =
        score_posteriors(m, trials, asv, resolve_threads(sub, o));
    scores = llr_scores(post, cfg.scoring);
  } else if (o.backend == "cosine") {
    scores = cosine_scores(trials, asv);
  } else {
    throw ConfigError("unknown backend '" + o.backend + "' (llr, cosine)");
  }

  const std::string scores_file = out_path(o.out_dir, "scores.tsv");
  write_scores(trials, scores, scores_file);
  write_run_records(cmdline, cfg, o.out_dir, inputs, {scores_file});
  std::cout << "scored " << trials.size() << " trials with the " << o.backend << " backend\n";
  return 0;
}

int cmd_eval(const CLI::App* sub, const Opts& o, const std::string& cmdline) {
  std::vector<InputRecord> inputs;
  ExperimentConfig cfg = base_config(o, inputs);
  apply_data_flags(sub, o, cfg);
  apply_scoring_flags(sub, o, cfg.scoring);
  if (given(sub, "--seed")) cfg.seed = o.seed;
  resolve_seeds(cfg);

  std::vector<TrialPair> trials;
  std::vector<double> scores;
  std::vector<std::string> outputs;
  if (!o.scores_path.empty()) {
    const std::vector<ScoredTrial> rows = read_scores(o.scores_path);
    inputs.push_back(record_input(o.scores_path));
    trials.reserve(rows.size());
    scores.reserve(rows.size());
    for (const ScoredTrial& r : rows) {
      trials.push_back(r.trial);
      scores.push_back(r.score);
    }
  } else {
    if (o.model_path.empty()) {
      throw ConfigError("eval needs either --scores or a checkpoint (--model)");
    }
    if (cfg.asv_path.empty()) {
      throw ConfigError("no ASV embeddings given (--asv or data.asv_embeddings)");
    }
    if (cfg.trials_path.empty()) {
      throw ConfigError("no trial list given (--trials or data.trials)");
    }
    const Model m = load_checkpoint(o.model_path);
    inputs.push_back(record_input(o.model_path));
    const EmbeddingStore asv = read_embeddings(cfg.asv_path);
    inputs.push_back(record_input(cfg.asv_path));
    check_model_input(m, asv);
    trials = read_trials(cfg.trials_path);
    inputs.push_back(record_input(cfg.trials_path));
    const std::vector<PosteriorTriple> post =
        score_posteriors(m, trials, asv, resolve_threads(sub, o));
    scores = llr_scores(post, cfg.scoring);
    const std::string scores_file = out_path(o.out_dir, "scores.tsv");
    write_scores(trials, scores, scores_file);
    outputs.push_back(scores_file);
  }

  const EvalReport report = evaluate_scores(trials, scores, cfg.scoring.alpha);
  const std::string report_text = eval_report_to_json(report);
  const std::string report_file = out_path(o.out_dir, "report.json");
  const std::string det_file = out_path(o.out_dir, "det.tsv");
  atomic_write_file(report_file, report_text);
  atomic_write_file(det_file, det_to_tsv(joint_det(trials, scores)));
  outputs.push_back(report_file);
  outputs.push_back(det_file);
  write_run_records(cmdline, cfg, o.out_dir, inputs, outputs);
  std::cout << report_text;
  return 0;
}

int cmd_sweep(const CLI::App* sub, const Opts& o, const std::string& cmdline) {
  std::vector<InputRecord> inputs;
  ExperimentConfig cfg = base_config(o, inputs);
  apply_data_flags(sub, o, cfg);
  apply_model_flags(sub, o, cfg);
  apply_train_flags(sub, o, cfg.train);
  apply_scoring_flags(sub, o, cfg.scoring);
  if (given(sub, "--reg-include-attr")) cfg.reg_include_attr = true;
  if (given(sub, "--attr-kind")) cfg.attr_kind = attr_kind_from_name(o.attr_kind);
  if (given(sub, "--eval-trials")) cfg.eval_trials_path = o.eval_trials_path;
  if (given(sub, "--grid")) {
    const std::size_t eq = o.grid.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == o.grid.size()) {
      throw ConfigError("grid must look like param=start:step:stop, got '" + o.grid + "'");
    }
    cfg.sweep_param = o.grid.substr(0, eq);
    cfg.sweep_grid = o.grid.substr(eq + 1);
  }
  if (given(sub, "--seed")) cfg.seed = o.seed;
  resolve_seeds(cfg);

  if (cfg.eval_trials_path.empty()) {
    throw ConfigError("no evaluation trials given (--eval-trials or eval.trials)");
  }
  TrainData d = load_train_data(cfg, cfg.model.variant, inputs);
  const std::vector<TrialPair> eval_trials = read_trials(cfg.eval_trials_path);
  inputs.push_back(record_input(cfg.eval_trials_path));
  cfg.model = resolve_model_config(cfg.model, d.asv, d.cm ? &*d.cm : nullptr,
                                   d.meta ? &*d.meta : nullptr, cfg.reg_include_attr,
                                   cfg.attr_kind);
  if (variant_has_attr(cfg.model.variant)) cfg.train.smoothing.k = cfg.model.attr_classes;

  SweepContext ctx;
  ctx.model = cfg.model;
  ctx.train = cfg.train;
  ctx.scoring = cfg.scoring;
  ctx.batching = make_plan(cfg, cfg.train, cfg.model.variant);
  ctx.train_trials = &d.trials;
  ctx.eval_trials = &eval_trials;
  ctx.asv = &d.asv;
  ctx.cm = d.cm ? &*d.cm : nullptr;
  ctx.meta = d.meta ? &*d.meta : nullptr;
  ctx.threads = resolve_threads(sub, o);

  std::string tsv;
  std::size_t n_rows = 0;
  if (o.attr_kinds) {
    const std::vector<AttrSweepRow> rows = sweep_attr_kinds(ctx);
    tsv = attr_sweep_to_tsv(rows);
    n_rows = rows.size();
  } else {
    if (cfg.sweep_param.empty()) {
      throw ConfigError("no sweep given (--grid param=start:step:stop or the sweep section)");
    }
    const SweepParam param = sweep_param_from_name(cfg.sweep_param);
    const std::vector<double> grid = parse_grid(cfg.sweep_grid);
    const std::vector<SweepRow> rows = run_sweep(param, grid, ctx);
    tsv = sweep_to_tsv(param, rows);
    n_rows = rows.size();
  }
  const std::string sweep_file = out_path(o.out_dir, "sweep.tsv");
  atomic_write_file(sweep_file, tsv);
  write_run_records(cmdline, cfg, o.out_dir, inputs, {sweep_file});
  std::cout << "swept " << n_rows << " points\n";
  return 0;
}

int cmd_check(const Opts& o) {
  std::vector<selfcheck::CheckResult> checks = selfcheck::run_gradient_checks(o.seed);
  const std::vector<selfcheck::CheckResult> eer = selfcheck::run_eer_checks(o.seed, o.instances);
  checks.insert(checks.end(), eer.begin(), eer.end());

  std::size_t failures = 0;
  for (const selfcheck::CheckResult& c : checks) {
    char line[160];
    std::snprintf(line, sizeof line, "%-32s %12.3e  limit %8.1e  %s", c.name.c_str(), c.value,
                  c.limit, c.pass ? "ok" : "FAIL");
    std::cout << line << "\n";
    if (!c.pass) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " of " << checks.size() << " checks failed\n";
    return 3;
  }
  std::cout << "all " << checks.size() << " checks passed\n";
  return 0;
}

void add_config_out(CLI::App* sub, Opts& o, bool with_out = true) {
  sub->add_option("--config", o.config_path, "experiment config JSON");
  if (with_out) sub->add_option("--out", o.out_dir, "output directory")->required();
  sub->add_option("--seed", o.seed, "top-level seed fed to every module");
}

void add_model_train_flags(CLI::App* sub, Opts& o) {
  sub->add_option("--variant", o.variant, "BASE, SPS, HPS, SPS-ATTR or HPS-ATTR");
  sub->add_option("--hidden", o.hidden, "hidden layer widths");
  sub->add_option("--input-dim", o.input_dim, "input dimension (2 x embedding dim)");
  sub->add_flag("--use-srelu", o.use_srelu, "scaled ReLU in the main stack");
  sub->add_flag("--hps-append-projection", o.hps_append_projection,
                "append the regression projection instead of its hidden layer");
  sub->add_option("--reg-target-dim", o.reg_target_dim, "regression target width (0 = derive)");
  sub->add_option("--attr-classes", o.attr_classes, "attribute head width (0 = derive)");
  sub->add_option("--lr", o.lr, "initial learning rate");
  sub->add_option("--lr-decay-factor", o.lr_decay, "step decay multiplier");
  sub->add_option("--lr-step-epochs", o.lr_step, "epochs per decay step");
  sub->add_option("--weight-decay", o.weight_decay, "L2 weight decay");
  sub->add_option("--batch-size", o.batch_size, "minibatch size");
  sub->add_option("--epochs", o.epochs, "training epochs");
  sub->add_option("--lambda", o.lambda, "classification weight in the composite loss");
  sub->add_option("--gamma", o.gamma, "attribute share of the auxiliary loss");
  sub->add_option("--epsilon", o.epsilon, "attribute label smoothing");
  sub->add_option("--reg-loss", o.reg_loss, "mse or cosine");
  sub->add_option("--cosine-denom", o.cosine_denom, "product or literal_max");
  sub->add_flag("--reg-include-attr", o.reg_include_attr,
                "append the attribute one-hot to the regression target");
  sub->add_option("--attr-kind", o.attr_kind, "attack, vocoder, synthesizer or wavegen");
}

void add_data_flags(CLI::App* sub, Opts& o, bool with_cm, bool with_meta) {
  sub->add_option("--asv", o.asv_path, "ASV embedding file");
  if (with_cm) sub->add_option("--cm", o.cm_path, "spoof embedding file");
  if (with_meta) sub->add_option("--metadata", o.metadata_path, "utterance metadata TSV");
  sub->add_option("--trials", o.trials_path, "trial list TSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized spoof-aware speaker verification backend"};
  app.require_subcommand(1);
  Opts o;
  const std::string cmdline = shell_join(argc, argv);

  CLI::App* gen_synth = app.add_subcommand("gen-synth", "generate a synthetic embedding corpus");
  add_config_out(gen_synth, o);
  gen_synth->add_option("--preset", o.preset, "named configuration (separable)");
  gen_synth->add_option("--speakers", o.speakers, "number of speakers");
  gen_synth->add_option("--utts-per-speaker", o.utts_per_speaker, "bonafide utterances each");
  gen_synth->add_option("--attacks", o.attacks, "number of attacks");
  gen_synth->add_option("--spoofs-per-attack", o.spoofs_per_attack,
                        "spoofs per speaker per attack");
  gen_synth->add_option("--asv-dim", o.asv_dim, "speaker embedding dimension");
  gen_synth->add_option("--cm-dim", o.cm_dim, "spoof embedding dimension");
  gen_synth->add_option("--vocoders", o.vocoders, "vocoder vocabulary size");
  gen_synth->add_option("--synthesizers", o.synthesizers, "synthesizer vocabulary size");
  gen_synth->add_option("--wavegens", o.wavegens, "waveform generator vocabulary size");
  gen_synth->add_option("--speaker-scale", o.speaker_scale, "speaker cluster spread");
  gen_synth->add_option("--attack-scale", o.attack_scale, "attack offset spread");
  gen_synth->add_option("--noise-sigma", o.noise_sigma, "per-utterance noise");

  CLI::App* gen_trials = app.add_subcommand("gen-trials", "pair utterances into trials");
  add_config_out(gen_trials, o);
  gen_trials->add_option("--metadata", o.metadata_path, "utterance metadata TSV");
  gen_trials->add_option("--mode", o.pair_mode, "full or sampled");
  gen_trials->add_flag("--ordered", o.ordered, "keep both directions of bonafide pairs");
  gen_trials->add_option("--cap-target", o.cap_target, "sampled-mode target cap");
  gen_trials->add_option("--cap-nontarget", o.cap_nontarget, "sampled-mode nontarget cap");
  gen_trials->add_option("--cap-spoof", o.cap_spoof, "sampled-mode spoof cap");
  gen_trials->add_option("--eval-fraction", o.eval_fraction,
                         "held-out share; 0 skips the split");

  CLI::App* train_cmd = app.add_subcommand("train", "train a backend from scratch");
  add_config_out(train_cmd, o);
  add_data_flags(train_cmd, o, true, true);
  add_model_train_flags(train_cmd, o);

  CLI::App* adapt_cmd = app.add_subcommand("adapt", "adapt selected parameter groups");
  add_config_out(adapt_cmd, o);
  adapt_cmd->add_option("--model", o.model_path, "checkpoint to adapt")->required();
  adapt_cmd->add_option("--groups", o.groups, "comma list of NETWORK, FC, BN, SRELU");
  adapt_cmd->add_flag("--add-srelu", o.add_srelu, "insert identity sReLU scalers first");
  add_data_flags(adapt_cmd, o, true, true);
  adapt_cmd->add_option("--lr", o.lr, "initial learning rate");
  adapt_cmd->add_option("--lr-decay-factor", o.lr_decay, "step decay multiplier");
  adapt_cmd->add_option("--lr-step-epochs", o.lr_step, "epochs per decay step");
  adapt_cmd->add_option("--weight-decay", o.weight_decay, "L2 weight decay");
  adapt_cmd->add_option("--batch-size", o.batch_size, "minibatch size");
  adapt_cmd->add_option("--epochs", o.epochs, "adaptation epochs");
  adapt_cmd->add_option("--lambda", o.lambda, "classification weight in the composite loss");
  adapt_cmd->add_option("--gamma", o.gamma, "attribute share of the auxiliary loss");
  adapt_cmd->add_option("--epsilon", o.epsilon, "attribute label smoothing");
  adapt_cmd->add_option("--reg-loss", o.reg_loss, "mse or cosine");
  adapt_cmd->add_option("--cosine-denom", o.cosine_denom, "product or literal_max");

  CLI::App* score_cmd = app.add_subcommand("score", "score trials against a model");
  add_config_out(score_cmd, o);
  score_cmd->add_option("--model", o.model_path, "checkpoint for the llr backend");
  add_data_flags(score_cmd, o, false, false);
  score_cmd->add_option("--backend", o.backend, "llr or cosine");
  score_cmd->add_option("--alpha", o.alpha, "non-target weight in the denominator");
  score_cmd->add_option("--floor", o.floor, "posterior floor before the log");
  score_cmd->add_option("--threads", o.threads, "scoring threads (GSASV_THREADS fallback)");

  CLI::App* eval_cmd = app.add_subcommand("eval", "compute EERs and DET coordinates");
  add_config_out(eval_cmd, o);
  eval_cmd->add_option("--scores", o.scores_path, "existing score file to evaluate");
  eval_cmd->add_option("--model", o.model_path, "checkpoint to score with");
  add_data_flags(eval_cmd, o, false, false);
  eval_cmd->add_option("--alpha", o.alpha, "non-target weight in the denominator");
  eval_cmd->add_option("--floor", o.floor, "posterior floor before the log");
  eval_cmd->add_option("--threads", o.threads, "scoring threads (GSASV_THREADS fallback)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps over a grid");
  add_config_out(sweep_cmd, o);
  add_data_flags(sweep_cmd, o, true, true);
  sweep_cmd->add_option("--eval-trials", o.eval_trials_path, "held-out trial list TSV");
  add_model_train_flags(sweep_cmd, o);
  sweep_cmd->add_option("--grid", o.grid, "param=start:step:stop or param=v1,v2,...");
  sweep_cmd->add_flag("--attr-kinds", o.attr_kinds, "sweep the attribute kind instead");
  sweep_cmd->add_option("--alpha", o.alpha, "operating alpha for retraining sweeps");
  sweep_cmd->add_option("--floor", o.floor, "posterior floor before the log");
  sweep_cmd->add_option("--threads", o.threads, "scoring threads (GSASV_THREADS fallback)");

  CLI::App* check_cmd = app.add_subcommand("check", "run the built-in numerical checks");
  check_cmd->add_option("--seed", o.seed, "seed for the random check points");
  check_cmd->add_option("--instances", o.instances, "random EER instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_synth->parsed()) return cmd_gen_synth(gen_synth, o, cmdline);
    if (gen_trials->parsed()) return cmd_gen_trials(gen_trials, o, cmdline);
    if (train_cmd->parsed()) return cmd_train(train_cmd, o, cmdline);
    if (adapt_cmd->parsed()) return cmd_adapt(adapt_cmd, o, cmdline);
    if (score_cmd->parsed()) return cmd_score(score_cmd, o, cmdline);
    if (eval_cmd->parsed()) return cmd_eval(eval_cmd, o, cmdline);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_cmd, o, cmdline);
    if (check_cmd->parsed()) return cmd_check(o);
  } catch (const NumericError& e) {
    std::cerr << "gsasv: " << e.what() << "\n";
    return 3;
  } catch (const FormatError& e) {
    std::cerr << "gsasv: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "gsasv: " << e.what() << "\n";
    return 2;
  } catch (const ProtocolError& e) {
    std::cerr << "gsasv: " << e.what() << "\n";
    return 2;
  } catch (const VocabError& e) {
    std::cerr << "gsasv: " << e.what() << "\n";
    return 2;
  } catch (const EvalError& e) {
    std::cerr << "gsasv: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "gsasv: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gsasv: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
