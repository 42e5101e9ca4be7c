// core/src/scoring.cpp

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

#include "gsasv/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "gsasv/errors.hpp"

namespace gsasv {

void validate(const ScoringConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (!(cfg.floor > 0.0)) throw DomainError("scoring floor must be positive");
}

double llr_score(const PosteriorTriple& p, const ScoringConfig& cfg) {
  const double num = std::max(p.theta_tar, cfg.floor);
  const double den = std::max(cfg.alpha * p.theta_non + (1.0 - cfg.alpha) * p.theta_spf,
                              cfg.floor);
  return std::log(num / den);
}

double cosine_score(const double* e, const double* t, std::size_t dim) {
  double dot = 0.0;
  double ne = 0.0;
  double nt = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    dot += e[i] * t[i];
    ne += e[i] * e[i];
    nt += t[i] * t[i];
  }
  return dot / std::max(std::sqrt(ne) * std::sqrt(nt), 1e-8);
}

double cosine_score(const std::vector<double>& e, const std::vector<double>& t) {
  if (e.size() != t.size()) {
    throw ShapeError("cosine_score needs equal dimensions, got " + std::to_string(e.size()) +
                     " and " + std::to_string(t.size()));
  }
  return cosine_score(e.data(), t.data(), e.size());
}

namespace {

struct TrialIndices {
  std::vector<std::size_t> enroll;
  std::vector<std::size_t> test;
};

TrialIndices lookup_trials(const std::vector<TrialPair>& trials, const EmbeddingStore& asv) {
  TrialIndices idx;
  idx.enroll.reserve(trials.size());
  idx.test.reserve(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    try {
      idx.enroll.push_back(asv.index_of(trials[i].enroll_id));
      idx.test.push_back(asv.index_of(trials[i].test_id));
    } catch (const DataError& e) {
      throw DataError("trial " + std::to_string(i) + " (" + trials[i].enroll_id + ", " +
                      trials[i].test_id + "): " + e.what());
    }
  }
  return idx;
}

constexpr std::size_t kRowsPerBlock = 256;

void score_range(const Model& m, const TrialIndices& idx, const EmbeddingStore& asv,
                 std::size_t begin, std::size_t end, std::vector<PosteriorTriple>& out) {
  const std::size_t dim = asv.dim();
  for (std::size_t start = begin; start < end; start += kRowsPerBlock) {
    const std::size_t n = std::min(kRowsPerBlock, end - start);
    Matrix input(n, 2 * dim);
    for (std::size_t r = 0; r < n; ++r) {
      const float* e = asv.vec_at(idx.enroll[start + r]);
      const float* t = asv.vec_at(idx.test[start + r]);
      double* row = input.row(r);
      for (std::size_t j = 0; j < dim; ++j) row[j] = e[j];
      for (std::size_t j = 0; j < dim; ++j) row[dim + j] = t[j];
    }
    const ForwardOutput fwd = forward_eval(m, input);
    for (std::size_t r = 0; r < n; ++r) {
      const double* logp = fwd.log_posteriors.row(r);
      out[start + r] = PosteriorTriple{std::exp(logp[0]), std::exp(logp[1]), std::exp(logp[2])};
    }
  }
}

}  // namespace

std::vector<PosteriorTriple> score_posteriors(const Model& m, const std::vector<TrialPair>& trials,
                                              const EmbeddingStore& asv, std::size_t n_threads) {
  if (2 * asv.dim() != m.cfg.input_dim) {
    throw ShapeError("model expects input_dim " + std::to_string(m.cfg.input_dim) +
                     " but the embedding store holds " + std::to_string(asv.dim()) +
                     "-dimensional vectors");
  }
  std::vector<PosteriorTriple> out(trials.size());
  if (trials.empty()) return out;
  const TrialIndices idx = lookup_trials(trials, asv);

  std::size_t workers = std::max<std::size_t>(1, n_threads);
  workers = std::min(workers, trials.size());
  if (workers == 1) {
    score_range(m, idx, asv, 0, trials.size(), out);
    return out;
  }

  const std::size_t per = (trials.size() + workers - 1) / workers;
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * per;
    const std::size_t end = std::min(trials.size(), begin + per);
    if (begin >= end) break;
    threads.emplace_back([&, w, begin, end] {
      try {
        score_range(m, idx, asv, begin, end, out);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<double> llr_scores(const std::vector<PosteriorTriple>& posteriors,
                               const ScoringConfig& cfg) {
  validate(cfg);
  std::vector<double> scores;
  scores.reserve(posteriors.size());
  for (const PosteriorTriple& p : posteriors) scores.push_back(llr_score(p, cfg));
  return scores;
}

std::vector<double> cosine_scores(const std::vector<TrialPair>& trials,
                                  const EmbeddingStore& asv) {
  const TrialIndices idx = lookup_trials(trials, asv);
  const std::size_t dim = asv.dim();
  std::vector<double> scores(trials.size());
  std::vector<double> e(dim);
  std::vector<double> t(dim);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const float* ef = asv.vec_at(idx.enroll[i]);
    const float* tf = asv.vec_at(idx.test[i]);
    for (std::size_t j = 0; j < dim; ++j) {
      e[j] = ef[j];
      t[j] = tf[j];
    }
    scores[i] = cosine_score(e.data(), t.data(), dim);
  }
  return scores;
}

}  // namespace gsasv
